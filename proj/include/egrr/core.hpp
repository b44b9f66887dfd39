#pragma once

// Domain types shared by the simulator, the recurrence solvers and the
// analysis code: model parameters, agent states, populations and count
// trajectories.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace egrr {

inline constexpr double kPi = std::numbers::pi;

/// Thrown when a parameter set violates one or more model invariants. The
/// message lists every violation, one per line.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += '\n';
      out += s;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// How the simulator advances infected / recovered agents.
///  Fixed:     deterministic stage clocks; exactly T_I (T_R) iterations per compartment.
///  Geometric: memoryless; leave with probability 1/T_I (1/T_R) each iteration,
///             the residence law the recurrence rules assume.
enum class ClockRule : std::uint8_t { Fixed, Geometric };

inline const char* to_string(ClockRule c) noexcept {
  return c == ClockRule::Fixed ? "fixed" : "geometric";
}

/// Scalar parameters of the epidemic agent-based model. The domain is the
/// unit square; `domain_side` is kept for completeness and must stay 1.
struct SimParams {
  std::int64_t n_agents = 10000;
  double rho0 = 0.04;         // infectivity radius
  double kappa = 0.95;        // contact tolerance; infection probability is 1 - kappa
  std::int32_t t_infect = 30;  // iterations spent infected
  std::int32_t t_recover = 30; // iterations spent recovered
  double dr = 0.001;          // random-walk step length
  std::int32_t n_iters = 500;
  std::uint64_t seed = 1;
  double domain_side = 1.0;
  ClockRule clock = ClockRule::Fixed;

  /// T_R / T_I.
  double q() const noexcept { return static_cast<double>(t_recover) / t_infect; }

  /// Area of one infectivity disk, ignoring truncation by the boundary.
  double neighborhood_area() const noexcept { return kPi * rho0 * rho0; }

  /// Expected number of susceptibles inside the first infected agent's disk at t = 0.
  double expected_initial_susceptibles() const noexcept {
    return static_cast<double>(n_agents - 1) * neighborhood_area() /
           (domain_side * domain_side);
  }

  bool operator==(const SimParams&) const = default;
};

/// Returns `p` unchanged when every invariant holds, otherwise throws a
/// ValidationError naming each violated bound.
inline SimParams validate(const SimParams& p) {
  std::vector<std::string> v;
  if (!(p.kappa >= 0.0 && p.kappa <= 1.0)) v.emplace_back("kappa out of [0,1]");
  if (p.n_agents < 2) v.emplace_back("n_agents: need at least one susceptible and one infected");
  if (p.domain_side != 1.0) v.emplace_back("domain_side must be 1 (unit square)");
  if (!(p.rho0 > 0.0 && p.rho0 < 0.5 * p.domain_side))
    v.emplace_back("rho0 out of (0, domain_side/2)");
  // "dr << domain_side": anything beyond a tenth of the domain is not a small step.
  if (!(p.dr >= 0.0 && p.dr <= 0.1 * p.domain_side)) v.emplace_back("dr out of [0, domain_side/10]");
  if (p.t_infect < 1) v.emplace_back("t_infect must be >= 1");
  if (p.t_recover < 1) v.emplace_back("t_recover must be >= 1");
  if (p.n_iters < 0) v.emplace_back("n_iters must be >= 0");
  if (!v.empty()) throw ValidationError(std::move(v));
  return p;
}

/// Compartment of one agent. Infected and Recovered carry a 1-based stage
/// clock bounded by T_I and T_R respectively; Susceptible has stage 0.
struct AgentState {
  enum class Kind : std::uint8_t { Susceptible, Infected, Recovered };

  Kind kind = Kind::Susceptible;
  std::int32_t stage = 0;

  static constexpr AgentState susceptible() noexcept { return {Kind::Susceptible, 0}; }
  static constexpr AgentState infected(std::int32_t stage = 1) noexcept {
    return {Kind::Infected, stage};
  }
  static constexpr AgentState recovered(std::int32_t stage = 1) noexcept {
    return {Kind::Recovered, stage};
  }

  constexpr bool is_susceptible() const noexcept { return kind == Kind::Susceptible; }
  constexpr bool is_infected() const noexcept { return kind == Kind::Infected; }
  constexpr bool is_recovered() const noexcept { return kind == Kind::Recovered; }

  bool operator==(const AgentState&) const = default;
};

inline const char* to_string(AgentState::Kind k) noexcept {
  switch (k) {
    case AgentState::Kind::Susceptible: return "S";
    case AgentState::Kind::Infected: return "I";
    case AgentState::Kind::Recovered: return "R";
  }
  return "?";
}

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

inline double distance_squared(Point a, Point b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct Population {
  std::vector<AgentState> states;
  std::vector<Point> positions;

  std::size_t size() const noexcept { return states.size(); }
};

/// Compartment sizes at one iteration. Integral for simulation output,
/// real-valued for the recurrence rules.
struct Counts {
  std::int64_t t = 0;
  double s = 0.0;
  double i = 0.0;
  double r = 0.0;

  double total() const noexcept { return s + i + r; }

  /// Conservation check: exact for integer counts (tolerance 0), relative
  /// tolerance for real-valued counts.
  bool conserves(double n, double rel_tol = 0.0) const noexcept {
    return std::abs(total() - n) <= rel_tol * n;
  }

  bool operator==(const Counts&) const = default;
};

inline Counts count_states(const Population& pop, std::int64_t t) {
  Counts c{t, 0.0, 0.0, 0.0};
  for (const auto& st : pop.states) {
    switch (st.kind) {
      case AgentState::Kind::Susceptible: c.s += 1.0; break;
      case AgentState::Kind::Infected: c.i += 1.0; break;
      case AgentState::Kind::Recovered: c.r += 1.0; break;
    }
  }
  return c;
}

using Trajectory = std::vector<Counts>;

/// True when t runs 0, 1, 2, ... and every element conserves `n` within `rel_tol`.
inline bool is_well_formed(const Trajectory& tr, double n, double rel_tol = 0.0) {
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (tr[k].t != static_cast<std::int64_t>(k)) return false;
    if (!tr[k].conserves(n, rel_tol)) return false;
  }
  return true;
}

}  // namespace egrr
