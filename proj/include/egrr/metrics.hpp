#pragma once

// Normalized curve distance between a simulated mean curve and a
// recurrence curve: time scaled by the last iteration, values by the
// simulation maximum, then the mean distance of each recurrence point to
// the simulation's linear spline.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "egrr/core.hpp"

namespace egrr {

struct CurvePoint {
  double t = 0.0;
  double u = 0.0;
};

using Curve = std::vector<CurvePoint>;

enum class Compartment { Susceptible, Infected, Recovered };

inline const char* to_string(Compartment c) noexcept {
  switch (c) {
    case Compartment::Susceptible: return "susceptible";
    case Compartment::Infected: return "infected";
    case Compartment::Recovered: return "recovered";
  }
  return "?";
}

/// One compartment of a trajectory as a curve, keeping iterations
/// `first_t` onward.
inline Curve curve_of(const Trajectory& tr, Compartment c, std::int64_t first_t = 1) {
  Curve out;
  for (const auto& x : tr) {
    if (x.t < first_t) continue;
    const double u = c == Compartment::Susceptible ? x.s : c == Compartment::Infected ? x.i : x.r;
    out.push_back({static_cast<double>(x.t), u});
  }
  return out;
}

inline void check_curve(const Curve& c, const char* what) {
  if (c.size() < 2) throw std::invalid_argument(std::string(what) + ": curve needs >= 2 points");
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!std::isfinite(c[k].t) || !std::isfinite(c[k].u))
      throw std::invalid_argument(std::string(what) + ": non-finite point");
    if (k > 0 && !(c[k].t > c[k - 1].t))
      throw std::invalid_argument(std::string(what) + ": t must be strictly increasing");
  }
}

/// Scales both curves by t <- t / M and u <- u / gamma, where M is the
/// simulation curve's last t and gamma its largest u.
inline std::pair<Curve, Curve> normalize_pair(const Curve& sim, const Curve& grr) {
  check_curve(sim, "simulation");
  check_curve(grr, "grr");
  if (sim.size() != grr.size()) throw std::invalid_argument("curves differ in length");
  const double m = sim.back().t;
  double gamma = 0.0;
  for (const auto& p : sim) gamma = std::max(gamma, p.u);
  if (gamma == 0.0) throw std::domain_error("degenerate flat-zero simulation curve");
  if (!(m > 0.0)) throw std::domain_error("last iteration must be positive");
  auto scale = [&](const Curve& c) {
    Curve out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = {c[k].t / m, c[k].u / gamma};
    return out;
  };
  return {scale(sim), scale(grr)};
}

/// Distance from `p` to the segment a-b (orthogonal projection clamped to
/// the end points).
inline double point_to_segment(CurvePoint p, CurvePoint a, CurvePoint b) noexcept {
  const double dt = b.t - a.t;
  const double du = b.u - a.u;
  const double len2 = dt * dt + du * du;
  double s = 0.0;
  if (len2 > 0.0) s = std::clamp(((p.t - a.t) * dt + (p.u - a.u) * du) / len2, 0.0, 1.0);
  // Use the end point itself at s = 1; a + (b - a) need not round to b.
  const CurvePoint foot = s == 1.0 ? b : CurvePoint{a.t + s * dt, a.u + s * du};
  return std::hypot(foot.t - p.t, foot.u - p.u);
}

/// Minimum distance from `p` to the linear spline through `c`.
inline double point_to_polyline(CurvePoint p, std::span<const CurvePoint> c) {
  if (c.empty()) throw std::invalid_argument("empty polyline");
  if (c.size() == 1) return std::hypot(p.t - c[0].t, p.u - c[0].u);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < c.size(); ++k)
    best = std::min(best, point_to_segment(p, c[k], c[k + 1]));
  return best;
}

/// Mean distance of the normalized recurrence points to the normalized
/// simulation spline. Not symmetric in its arguments.
inline double curve_error(const Curve& sim, const Curve& grr) {
  const auto [s, g] = normalize_pair(sim, grr);
  double sum = 0.0;
  for (const auto& p : g) sum += point_to_polyline(p, s);
  return sum / static_cast<double>(g.size());
}

}  // namespace egrr
