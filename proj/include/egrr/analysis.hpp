#pragma once

// Fixed points of the globally homogeneous recurrence and their linear
// stability.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "egrr/core.hpp"
#include "egrr/grr.hpp"

namespace egrr {

/// d(H, G) / d(I, R).
struct Jacobian2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  double trace() const noexcept { return a11 + a22; }
  double det() const noexcept { return a11 * a22 - a12 * a21; }
};

/// Closed-form Jacobian of the global map at (I, R):
///   dH/dI = -(1-k)[(N-I-R)(1-mu)^I ln(1-mu) + 1 - (1-mu)^I] + 1 - 1/T_I
///   dH/dR = -(1-k)(1 - (1-mu)^I)
///   dG/dI = 1/T_I,  dG/dR = 1 - 1/(q T_I)
inline Jacobian2 jacobian_at(GrrState s, const SimParams& p) {
  const double n = static_cast<double>(p.n_agents);
  const double mu = p.neighborhood_area();
  const double ti = p.t_infect;
  const double surv = survival_power(mu, s.i);
  const double log_keep = std::log1p(-mu);
  const double inf = 1.0 - p.kappa;
  Jacobian2 j;
  j.a11 = -inf * ((n - s.i - s.r) * surv * log_keep + (1.0 - surv)) + 1.0 - 1.0 / ti;
  j.a12 = -inf * (1.0 - surv);
  j.a21 = 1.0 / ti;
  j.a22 = 1.0 - 1.0 / (p.q() * ti);
  return j;
}

using Eigenpair = std::array<std::complex<double>, 2>;

/// Roots of lambda^2 - tr lambda + det. A triangular matrix returns its
/// diagonal exactly (a11 first).
inline Eigenpair eigen2(const Jacobian2& j) {
  if (j.a12 == 0.0 || j.a21 == 0.0) return {std::complex<double>(j.a11), std::complex<double>(j.a22)};
  const double half_tr = 0.5 * j.trace();
  const double disc = half_tr * half_tr - j.det();
  if (disc >= 0.0) {
    // Cancellation-free pair: the larger-magnitude root first, then det / it.
    const double big = half_tr + std::copysign(std::sqrt(disc), half_tr);
    const double small = big != 0.0 ? j.det() / big : 0.0;
    return {std::complex<double>(big), std::complex<double>(small)};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half_tr, im), std::complex<double>(half_tr, -im)};
}

enum class Stability { Stable, Unstable, Saddle, Nonhyperbolic };

inline const char* to_string(Stability s) noexcept {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Saddle: return "saddle";
    case Stability::Nonhyperbolic: return "nonhyperbolic";
  }
  return "?";
}

inline constexpr double kHyperbolicTol = 1e-9;

inline Stability classify(const Eigenpair& ev) {
  const double m0 = std::abs(ev[0]);
  const double m1 = std::abs(ev[1]);
  if (std::abs(m0 - 1.0) <= kHyperbolicTol || std::abs(m1 - 1.0) <= kHyperbolicTol)
    return Stability::Nonhyperbolic;
  if (m0 < 1.0 && m1 < 1.0) return Stability::Stable;
  if (m0 > 1.0 && m1 > 1.0) return Stability::Unstable;
  return Stability::Saddle;
}

struct FixedPointReport {
  GrrState location;
  Jacobian2 jacobian;
  Eigenpair eigenvalues;
  Stability classification = Stability::Nonhyperbolic;
  double residual = 0.0;  // max component of |global_step(x) - x|
  std::string note;
};

inline FixedPointReport describe_fixed_point(GrrState x, const SimParams& p) {
  FixedPointReport rep;
  rep.location = x;
  rep.jacobian = jacobian_at(x, p);
  rep.eigenvalues = eigen2(rep.jacobian);
  rep.classification = classify(rep.eigenvalues);
  const GrrState y = global_step(x, p);
  rep.residual = std::max(std::abs(y.i - x.i), std::abs(y.r - x.r));
  return rep;
}

/// Scalar fixed-point residual along R = qI:
///   g(I) = (N - (1+q) I)(1 - (1-mu)^I)(1-k) - I / T_I.
inline double fixed_point_residual(double i, const SimParams& p) {
  const double n = static_cast<double>(p.n_agents);
  return (n - (1.0 + p.q()) * i) * (1.0 - survival_power(p.neighborhood_area(), i)) *
             (1.0 - p.kappa) -
         i / p.t_infect;
}

inline constexpr int kFixedPointGrid = 512;

/// The trivial point first, then every nontrivial root of g on
/// (0, N / (1 + q)) found by a 512-sample sign scan and bisection.
inline std::vector<FixedPointReport> find_fixed_points(const SimParams& p) {
  std::vector<FixedPointReport> out;
  out.push_back(describe_fixed_point({0.0, 0.0}, p));

  const double n = static_cast<double>(p.n_agents);
  const double upper = n / (1.0 + p.q());
  const double tol = 1e-10 * n;
  auto g = [&](double i) { return fixed_point_residual(i, p); };

  std::vector<double> grid;
  grid.reserve(kFixedPointGrid + 1);
  grid.push_back(upper * 0x1.0p-40);  // g(0) = 0 exactly, so start just right of it
  for (int k = 1; k <= kFixedPointGrid; ++k) grid.push_back(upper * k / kFixedPointGrid);

  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double lo = grid[k], hi = grid[k + 1];
    double glo = g(lo), ghi = g(hi);
    if (glo == 0.0 || (glo > 0.0) == (ghi > 0.0)) continue;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
      mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      if (std::abs(gm) < tol && hi - lo < 1e-12 * upper) break;
      if (mid <= lo || mid >= hi) break;
      if ((gm > 0.0) == (glo > 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    out.push_back(describe_fixed_point({mid, p.q() * mid}, p));
  }
  if (out.size() == 1) out.front().note = "no nontrivial fixed point detected";
  return out;
}

}  // namespace egrr
