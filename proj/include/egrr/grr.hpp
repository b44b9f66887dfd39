#pragma once

// Deterministic recurrences for the expected infected / recovered counts.
//
//  * global: infectivity disks assumed uniformly spread over the domain;
//  * local:  disks confined to an expanding circular front of radius zeta_t;
//  * sparse: local rule whose front grows by the area the newly infected
//            agents' disks add outside the current front.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "egrr/core.hpp"

namespace egrr {

/// Expected infected and recovered counts; S = N - i - r.
struct GrrState {
  double i = 0.0;
  double r = 0.0;
  bool operator==(const GrrState&) const = default;
};

/// Infection-front radii (zeta_t, zeta_{t-1}). `saturated` latches once the
/// front disk area reaches the domain area.
struct FrontState {
  double zeta = 0.0;
  double zeta_prev = 0.0;
  bool saturated = false;

  /// Front at t = 0: the initial infected agent's own disk, with an
  /// empty t = -1 front.
  static FrontState initial(const SimParams& p) noexcept {
    return {p.rho0, 0.0, kPi * p.rho0 * p.rho0 >= 1.0};
  }

  /// Front disk area capped at the domain area.
  double area() const noexcept { return std::min(kPi * zeta * zeta, 1.0); }

  bool operator==(const FrontState&) const = default;
};

enum class GrrVariant { Global, Local, Sparse };

inline const char* to_string(GrrVariant v) noexcept {
  switch (v) {
    case GrrVariant::Global: return "global";
    case GrrVariant::Local: return "local";
    case GrrVariant::Sparse: return "sparse";
  }
  return "?";
}

inline GrrVariant parse_variant(const std::string& s) {
  if (s == "global") return GrrVariant::Global;
  if (s == "local") return GrrVariant::Local;
  if (s == "sparse") return GrrVariant::Sparse;
  throw std::invalid_argument("unknown GRR variant '" + s + "' (expected global|local|sparse)");
}

/// (1 - a)^n for real n >= 0. pow handles the a = 1 edge (0^0 = 1, 0^n = 0).
inline double survival_power(double a, double n) noexcept { return std::pow(1.0 - a, n); }

/// Probability that a uniformly placed point lies in at least one of
/// `i_count` independent, uniformly placed disks of area `mu_n` inside a
/// region of area `mu_region`.
inline double prob_in_transition_region(double i_count, double mu_n, double mu_region) {
  if (mu_n > mu_region) throw std::domain_error("neighborhood exceeds region");
  if (!(mu_region > 0.0)) throw std::domain_error("region area must be positive");
  if (i_count <= 0.0) return 0.0;
  return 1.0 - survival_power(mu_n / mu_region, i_count);
}

namespace detail {

inline GrrState linear_part(GrrState s, const SimParams& p) noexcept {
  const double ti = p.t_infect;
  return {(1.0 - 1.0 / ti) * s.i, s.i / ti + (1.0 - 1.0 / (p.q() * ti)) * s.r};
}

}  // namespace detail

/// Globally homogeneous step: H(I, R), G(I, R).
inline GrrState global_step(GrrState s, const SimParams& p) {
  const double n = static_cast<double>(p.n_agents);
  GrrState next = detail::linear_part(s, p);
  next.i += (n - s.i - s.r) * prob_in_transition_region(s.i, p.neighborhood_area(), 1.0) *
            (1.0 - p.kappa);
  return next;
}

inline Counts to_counts(std::int64_t t, GrrState s, const SimParams& p) {
  return {t, static_cast<double>(p.n_agents) - s.i - s.r, s.i, s.r};
}

inline Trajectory global_trajectory(const SimParams& p, double i0 = 1.0, double r0 = 0.0) {
  Trajectory out;
  out.reserve(static_cast<std::size_t>(p.n_iters) + 1);
  GrrState s{i0, r0};
  out.push_back(to_counts(0, s, p));
  for (std::int64_t t = 1; t <= p.n_iters; ++t) {
    s = global_step(s, p);
    out.push_back(to_counts(t, s, p));
  }
  return out;
}

/// zeta_{t+1} = rho0 + sqrt(((zeta_t + dr)^2 + max(zeta_{t-1} - dr, 0)^2) / 2).
inline FrontState front_radius_update(FrontState f, const SimParams& p) noexcept {
  const double outer = f.zeta + p.dr;
  const double inner = std::max(f.zeta_prev - p.dr, 0.0);
  const double next = p.rho0 + std::sqrt(0.5 * (outer * outer + inner * inner));
  return {next, f.zeta, f.saturated || kPi * next * next >= 1.0};
}

struct LocalStepResult {
  GrrState state;
  FrontState front;
  bool clamped = false;  // front area was below one disk area and was raised to it
};

/// Infected term of the locally homogeneous rule with front area `mu_front`.
/// Returns whether the front area had to be clamped up to the disk area.
inline bool local_infection(GrrState s, double mu_front, const SimParams& p, double& out) {
  const double mu_n = p.neighborhood_area();
  bool clamped = false;
  if (mu_front < mu_n) {
    mu_front = mu_n;
    clamped = true;
  }
  const double n = static_cast<double>(p.n_agents);
  out = (n - s.i - s.r) * prob_in_transition_region(s.i, mu_n, mu_front) * mu_front *
        (1.0 - p.kappa);
  return clamped;
}

/// Locally homogeneous step; the front is advanced with front_radius_update.
inline LocalStepResult local_step(GrrState s, FrontState f, const SimParams& p) {
  LocalStepResult out;
  out.state = detail::linear_part(s, p);
  double infection = 0.0;
  out.clamped = local_infection(s, f.area(), p, infection);
  out.state.i += infection;
  out.front = front_radius_update(f, p);
  return out;
}

// --- sparse front -----------------------------------------------------------

/// Intermediate quantities of the sparse front geometry, exposed for tests
/// and diagnostics. The newly infected agents sit evenly on a circle of
/// radius `r_com` around the centre, `theta` = 2 pi / n apart.
struct GeomScratch {
  double r_com = 0.0;
  double n_new = 0.0;
  double theta = 0.0;       // angular spacing of the agents, 2 pi / n
  double theta_lens = 0.0;  // angle the lens chord subtends at the front centre
  double phi = 0.0;    // angle of the agent-disk sector cut by the front
  double alpha = 0.0;  // half chord between the agent disk and the front
  double y_int = 0.0;  // distance from the centre to that chord
  double x_hat = 0.0;  // overlap integration limit
  double h = 0.0;
  double k_off = 0.0;
  double beta = 0.0;  // distance between neighbouring agents
  double eta = 0.0;
};

/// Radial centre of mass of the annulus between the last two fronts.
inline double radial_center_of_mass(double zeta, double zeta_prev) noexcept {
  return std::sqrt(0.5 * (zeta * zeta + zeta_prev * zeta_prev));
}

/// Area of region A: the part of one agent disk (radius rho0, centre at
/// distance r_com from the front centre) lying outside the front circle of
/// radius zeta. With y_int the distance from the centre to the common chord
/// and alpha its half length,
///
///   mu(A) = (phi rho0^2 - theta zeta^2) / 2 + alpha r_com
///
/// where phi is the angle the chord subtends at the agent and theta the
/// angle it subtends at the front centre. When the agent centre lies inside
/// the chord (y_int >= r_com) phi = 2 asin(alpha / rho0) and alpha r_com =
/// alpha y_int - alpha sqrt(rho0^2 - alpha^2); phi comes from atan2 so the
/// major sector is used otherwise. `n` only fills scratch.theta = 2 pi / n.
///
/// Degenerate placements: disk inside the front -> 0; disk fully outside
/// -> pi rho0^2; front inside the disk -> pi (rho0^2 - zeta^2).
inline double sparse_mu_A(double zeta, double r_com, double rho0, double n,
                          GeomScratch* scratch = nullptr) {
  if (n < 1.0) throw std::domain_error("sparse_mu_A: n must be >= 1");
  GeomScratch g;
  g.r_com = r_com;
  g.n_new = n;
  g.theta = 2.0 * kPi / n;
  double area = 0.0;
  if (r_com + rho0 <= zeta) {
    area = 0.0;
  } else if (r_com >= zeta + rho0) {
    area = kPi * rho0 * rho0;
  } else if (zeta + r_com <= rho0) {
    area = kPi * (rho0 * rho0 - zeta * zeta);
  } else {
    g.y_int = (zeta * zeta - rho0 * rho0 + r_com * r_com) / (2.0 * r_com);
    g.alpha = std::sqrt(std::max(zeta * zeta - g.y_int * g.y_int, 0.0));
    g.phi = 2.0 * std::atan2(g.alpha, g.y_int - r_com);
    g.theta_lens = 2.0 * std::atan2(g.alpha, g.y_int);
    area = 0.5 * (g.phi * rho0 * rho0 - g.theta_lens * zeta * zeta) + g.alpha * r_com;
    area = std::max(area, 0.0);
  }
  if (scratch) *scratch = g;
  return area;
}

/// Area shared by the outside-the-front parts of two neighbouring agent
/// disks, `beta` = 2 r_com sin(theta / 2) apart. With the pair placed at
/// (-h, k) and (h, k) the region is symmetric about x = 0, and for x >= 0
/// its vertical slice is the chord of the farther disk, y in [k - s, k + s]
/// with s = sqrt(rho0^2 - (x + h)^2), minus |y| < c, c = sqrt(zeta^2 - x^2).
/// The usual placement gives
///
///   2 * integral_0^x_hat [k + sqrt(rho0^2 - (x + h)^2) - sqrt(zeta^2 - x^2)] dx
///
/// where x_hat is the larger root of
///   4(h^2 + k^2) x^2 + 4h(2k^2 + eta) x + eta^2 - 4k^2 (rho0^2 - h^2) = 0,
///   eta = h^2 - k^2 + zeta^2 - rho0^2,
/// the abscissae where the disk meets the front. Large disks can cross the
/// front twice or wrap below it, so the slice length is integrated piecewise
/// between 0, both roots, zeta and rho0 - h; every piece has the same
/// closed-form antiderivatives.
inline double sparse_mu_overlap(double zeta, double r_com, double rho0, double n,
                                GeomScratch* scratch = nullptr) {
  GeomScratch g;
  g.r_com = r_com;
  g.n_new = n;
  g.theta = 2.0 * kPi / std::max(n, 1.0);
  if (n < 2.0) {
    // A single agent has no neighbour to overlap with.
    if (scratch) *scratch = g;
    return 0.0;
  }
  g.beta = 2.0 * r_com * std::sin(0.5 * g.theta);
  g.h = 0.5 * g.beta;
  g.k_off = std::sqrt(std::max(r_com * r_com - g.h * g.h, 0.0));
  g.eta = g.h * g.h - g.k_off * g.k_off + zeta * zeta - rho0 * rho0;

  const double h = g.h, k = g.k_off;
  const double qa = 4.0 * (h * h + k * k);
  const double qb = 4.0 * h * (2.0 * k * k + g.eta);
  const double qc = g.eta * g.eta - 4.0 * k * k * (rho0 * rho0 - h * h);
  const double disc = qb * qb - 4.0 * qa * qc;
  const double x_end = rho0 - h;

  std::vector<double> cuts{0.0, x_end};
  if (zeta < x_end) cuts.push_back(zeta);
  if (qa > 0.0 && disc >= 0.0) {
    g.x_hat = (-qb + std::sqrt(disc)) / (2.0 * qa);
    for (double root : {g.x_hat, (-qb - std::sqrt(disc)) / (2.0 * qa)})
      if (root > 0.0 && root < x_end) cuts.push_back(root);
  }
  double area = 0.0;
  if (x_end > 0.0) {
    std::sort(cuts.begin(), cuts.end());
    // Antiderivative of sqrt(R^2 - u^2), doubled: u sqrt(R^2 - u^2) + R^2 asin(u / R).
    auto seg = [](double u, double radius) {
      const double s = std::sqrt(std::max(radius * radius - u * u, 0.0));
      return u * s + radius * radius * std::asin(std::clamp(u / radius, -1.0, 1.0));
    };
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double x0 = cuts[j], x1 = cuts[j + 1];
      if (!(x1 > x0)) continue;
      // Slice length on this piece as cs * s + cc * c + ck * k.
      const double xm = 0.5 * (x0 + x1);
      const double s = std::sqrt(std::max(rho0 * rho0 - (xm + h) * (xm + h), 0.0));
      double cs = 0.0, cc = 0.0, ck = 0.0;
      if (xm >= zeta) {
        cs = 2.0;
      } else {
        const double c = std::sqrt(zeta * zeta - xm * xm);
        if (k + s > c) {
          if (k - s > c) cs += 2.0;
          else cs += 1.0, ck += 1.0, cc -= 1.0;
        }
        if (k - s < -c) {
          if (k + s < -c) cs += 2.0;
          else cs += 1.0, ck -= 1.0, cc -= 1.0;
        }
      }
      // Integrals of s and c over [x0, x1] are half the seg differences.
      area += cs * 0.5 * (seg(x1 + h, rho0) - seg(x0 + h, rho0)) +
              cc * 0.5 * (seg(std::min(x1, zeta), zeta) - seg(std::min(x0, zeta), zeta)) +
              ck * k * (x1 - x0);
    }
    area = std::max(2.0 * area, 0.0);
  }
  if (scratch) *scratch = g;
  return area;
}

/// Grows the front by the area the `n_new` newly infected agents' disks add
/// outside it: union = n (mu(A) - mu(A1 n A2)), zeta' = sqrt(zeta^2 + union / pi).
/// Along a ring every point covered by k consecutive lenses lies in k - 1
/// neighbouring overlaps, so the union is exact until the lenses close the ring.
/// n_new <= 0 leaves the radius unchanged; 0 < n_new < 1 is treated as 1.
inline FrontState sparse_front_update(FrontState f, double n_new, const SimParams& p,
                                      double* union_area = nullptr) {
  double added = 0.0;
  if (n_new > 0.0) {
    const double n = std::max(n_new, 1.0);
    const double r = radial_center_of_mass(f.zeta, f.zeta_prev);
    const double a = sparse_mu_A(f.zeta, r, p.rho0, n);
    const double ov = sparse_mu_overlap(f.zeta, r, p.rho0, n);
    added = std::max(n * (a - ov), 0.0);
  }
  if (union_area) *union_area = added;
  const double next = std::sqrt(f.zeta * f.zeta + added / kPi);
  return {next, f.zeta, f.saturated || kPi * next * next >= 1.0};
}

/// Trajectory plus the front radius used at every iteration.
struct LocalTrajectory {
  Trajectory counts;
  std::vector<FrontState> fronts;  // fronts[t] is the front in effect at iteration t
  std::int64_t clamped_steps = 0;
};

namespace detail {

template <typename AdvanceFront>
LocalTrajectory run_local(const SimParams& p, std::int64_t iters, AdvanceFront&& advance) {
  LocalTrajectory out;
  out.counts.reserve(static_cast<std::size_t>(iters) + 1);
  out.fronts.reserve(static_cast<std::size_t>(iters) + 1);
  GrrState s{1.0, 0.0};
  double prev_i = 0.0;  // infected before t = 0
  FrontState f = FrontState::initial(p);
  out.counts.push_back(to_counts(0, s, p));
  out.fronts.push_back(f);
  for (std::int64_t t = 1; t <= iters; ++t) {
    GrrState next = linear_part(s, p);
    double infection = 0.0;
    if (local_infection(s, f.area(), p, infection)) ++out.clamped_steps;
    next.i += infection;
    f = advance(f, s.i, prev_i);
    prev_i = s.i;
    s = next;
    out.counts.push_back(to_counts(t, s, p));
    out.fronts.push_back(f);
  }
  return out;
}

}  // namespace detail

/// Locally homogeneous trajectory with the radial-step front (p.n_iters iterations).
inline LocalTrajectory local_trajectory_detailed(const SimParams& p, std::int64_t iters) {
  return detail::run_local(p, iters, [&](FrontState f, double, double) {
    return front_radius_update(f, p);
  });
}

inline Trajectory local_trajectory(const SimParams& p) {
  return local_trajectory_detailed(p, p.n_iters).counts;
}

/// Locally homogeneous trajectory whose front grows with the newly infected
/// count n = I_t - I_{t-1} (clamped at 0), I_{-1} = 0.
inline LocalTrajectory sparse_local_trajectory_detailed(const SimParams& p, std::int64_t iters) {
  return detail::run_local(p, iters, [&](FrontState f, double i_now, double i_before) {
    return sparse_front_update(f, std::max(i_now - i_before, 0.0), p);
  });
}

inline Trajectory sparse_local_trajectory(const SimParams& p, std::int64_t iters) {
  return sparse_local_trajectory_detailed(p, iters).counts;
}

inline Trajectory grr_trajectory(GrrVariant v, const SimParams& p) {
  switch (v) {
    case GrrVariant::Global: return global_trajectory(p);
    case GrrVariant::Local: return local_trajectory(p);
    case GrrVariant::Sparse: return sparse_local_trajectory(p, p.n_iters);
  }
  return {};
}

}  // namespace egrr
