#pragma once

// Stochastic off-lattice SIR agent simulation on the unit square.
//
// One iteration: index the infected agents at their time-t positions,
// apply the state transition rules to every agent from that snapshot, then
// move every agent one random-walk step with reflection at the walls.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "egrr/core.hpp"
#include "egrr/neighbor_index.hpp"
#include "egrr/rng.hpp"

namespace egrr {

/// Agent 0 starts Infected(1) at the centre; the rest are Susceptible and
/// i.i.d. uniform on the square (x drawn before y).
inline Population init_population(const SimParams& p, RngStream& rng) {
  Population pop;
  const auto n = static_cast<std::size_t>(p.n_agents);
  pop.states.assign(n, AgentState::susceptible());
  pop.positions.resize(n);
  pop.states[0] = AgentState::infected(1);
  pop.positions[0] = {0.5, 0.5};
  for (std::size_t k = 1; k < n; ++k) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    pop.positions[k] = {x, y};
  }
  return pop;
}

/// Advances one agent's stage clock; susceptibles are handled by the caller.
inline AgentState advance_clock(AgentState s, const SimParams& p) noexcept {
  switch (s.kind) {
    case AgentState::Kind::Infected:
      return s.stage < p.t_infect ? AgentState::infected(s.stage + 1) : AgentState::recovered(1);
    case AgentState::Kind::Recovered:
      return s.stage < p.t_recover ? AgentState::recovered(s.stage + 1)
                                   : AgentState::susceptible();
    case AgentState::Kind::Susceptible:
      break;
  }
  return s;
}

/// Reflective wall: a coordinate that leaves [0, 1] is placed `dr` inside
/// the wall it crossed. Each axis is handled independently, so a corner
/// exit is shifted in both.
inline double reflect(double v, double dr) noexcept {
  if (v < 0.0) return dr;
  if (v > 1.0) return 1.0 - dr;
  return v;
}

inline Point move_point(Point p, double dr, double theta) noexcept {
  return {reflect(p.x + dr * std::cos(theta), dr), reflect(p.y + dr * std::sin(theta), dr)};
}

/// Holds the per-run scratch (neighbour grid, infected id list) so repeated
/// iterations allocate nothing.
class Simulator {
public:
  explicit Simulator(const SimParams& p)
      : params_(p), index_(NeighborIndex::cells_per_side_for(p.rho0, p.dr)) {}

  const SimParams& params() const noexcept { return params_; }
  const NeighborIndex& index() const noexcept { return index_; }

  /// Rebuilds the neighbour grid over the currently infected agents.
  void index_infected(const Population& pop) {
    infected_.clear();
    for (std::size_t k = 0; k < pop.size(); ++k)
      if (pop.states[k].is_infected()) infected_.push_back(static_cast<std::uint32_t>(k));
    index_.build(pop.positions, infected_);
  }

  /// State transitions, simultaneous from the time-t snapshot. A susceptible
  /// within rho0 of any infected agent draws one uniform X and becomes
  /// Infected(1) when X < 1 - kappa; the number of covering disks does not
  /// matter. Draws are consumed in agent order, only by such susceptibles.
  void step_states(Population& pop, RngStream& rng) {
    index_infected(pop);
    const double p_infect = 1.0 - params_.kappa;
    const bool can_infect = params_.rho0 > 0.0 && !infected_.empty();
    for (std::size_t k = 0; k < pop.size(); ++k) {
      auto& s = pop.states[k];
      if (s.is_susceptible()) {
        if (can_infect && index_.any_within(pop.positions[k], params_.rho0) &&
            rng.uniform() < p_infect)
          s = AgentState::infected(1);
      } else if (params_.clock == ClockRule::Fixed) {
        s = advance_clock(s, params_);
      } else {
        s = advance_geometric(s, rng);
      }
    }
  }

  /// Memoryless rule: one draw per infected / recovered agent. The stage
  /// counts iterations spent so far, saturating at T_I / T_R.
  AgentState advance_geometric(AgentState s, RngStream& rng) const {
    const bool infected = s.is_infected();
    const std::int32_t bound = infected ? params_.t_infect : params_.t_recover;
    if (rng.uniform() < 1.0 / bound)
      return infected ? AgentState::recovered(1) : AgentState::susceptible();
    s.stage = std::min(s.stage + 1, bound);
    return s;
  }

  void step_movement(Population& pop, RngStream& rng) const {
    for (auto& x : pop.positions) x = move_point(x, params_.dr, rng.angle());
  }

  void step(Population& pop, RngStream& rng) {
    step_states(pop, rng);
    step_movement(pop, rng);
  }

private:
  SimParams params_;
  NeighborIndex index_;
  std::vector<std::uint32_t> infected_;
};

inline Population step_states(Population pop, const SimParams& p, RngStream& rng) {
  Simulator sim(p);
  sim.step_states(pop, rng);
  return pop;
}

inline Population step_movement(Population pop, const SimParams& p, RngStream& rng) {
  Simulator(p).step_movement(pop, rng);
  return pop;
}

/// Called with (t, population) after the state at iteration t is known.
using SnapshotObserver = std::function<void(std::int64_t, const Population&)>;

/// Runs p.n_iters iterations from a fresh population and returns integer
/// counts for t = 0..n_iters.
inline Trajectory simulate(const SimParams& p, RngStream& rng,
                           const SnapshotObserver& observer = {}) {
  Simulator sim(p);
  Population pop = init_population(p, rng);
  Trajectory out;
  out.reserve(static_cast<std::size_t>(p.n_iters) + 1);
  out.push_back(count_states(pop, 0));
  if (observer) observer(0, pop);
  for (std::int64_t t = 1; t <= p.n_iters; ++t) {
    sim.step(pop, rng);
    out.push_back(count_states(pop, t));
    if (observer) observer(t, pop);
  }
  return out;
}

inline Trajectory simulate(const SimParams& p) {
  auto rng = rng_stream(p.seed);
  return simulate(p, rng);
}

struct BatchResult {
  Trajectory mean;
  Trajectory stddev;  // population standard deviation per iteration
  std::int64_t replicates = 0;
  std::vector<Counts> terminal;  // last Counts of each replicate, by replicate index
  std::int64_t died_out = 0;     // replicates whose infected count reached 0

  double died_out_fraction() const noexcept {
    return replicates > 0 ? static_cast<double>(died_out) / replicates : 0.0;
  }
};

inline bool infection_died_out(const Trajectory& tr) {
  return std::any_of(tr.begin(), tr.end(), [](const Counts& c) { return c.i == 0.0; });
}

/// Pointwise mean and standard deviation of equally long trajectories,
/// accumulated in the given order.
inline BatchResult aggregate(std::span<const Trajectory> runs) {
  BatchResult out;
  out.replicates = static_cast<std::int64_t>(runs.size());
  if (runs.empty()) return out;
  const std::size_t len = runs.front().size();
  const double inv = 1.0 / static_cast<double>(runs.size());
  out.mean.resize(len);
  out.stddev.resize(len);
  for (std::size_t t = 0; t < len; ++t) {
    Counts m{static_cast<std::int64_t>(t), 0, 0, 0};
    for (const auto& r : runs) {
      m.s += r[t].s;
      m.i += r[t].i;
      m.r += r[t].r;
    }
    m.s *= inv;
    m.i *= inv;
    m.r *= inv;
    Counts v{static_cast<std::int64_t>(t), 0, 0, 0};
    for (const auto& r : runs) {
      v.s += (r[t].s - m.s) * (r[t].s - m.s);
      v.i += (r[t].i - m.i) * (r[t].i - m.i);
      v.r += (r[t].r - m.r) * (r[t].r - m.r);
    }
    v.s = std::sqrt(v.s * inv);
    v.i = std::sqrt(v.i * inv);
    v.r = std::sqrt(v.r * inv);
    out.mean[t] = m;
    out.stddev[t] = v;
  }
  for (const auto& r : runs) {
    out.terminal.push_back(r.back());
    if (infection_died_out(r)) ++out.died_out;
  }
  return out;
}

/// Runs `fn(k)` for k in [0, count) on up to `threads` workers. Each k is
/// executed exactly once; callers write results into slot k.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) fn(k);
    });
}

/// Independent replicates; replicate k uses seed p.seed + k. The reduction
/// is ordered by replicate index, so the result does not depend on
/// `threads` (0 = hardware concurrency).
inline BatchResult simulate_batch(const SimParams& p, std::int64_t replicates,
                                  unsigned threads = 0) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  std::vector<Trajectory> runs(static_cast<std::size_t>(replicates));
  parallel_for(runs.size(), threads, [&](std::size_t k) {
    auto rng = rng_stream(replicate_seed(p.seed, k));
    runs[k] = simulate(p, rng);
  });
  return aggregate(runs);
}

}  // namespace egrr
