#include <cmath>

#include <gtest/gtest.h>

#include "egrr/grr.hpp"
#include "egrr/rng.hpp"

using namespace egrr;

namespace {

SimParams base(double rho0 = 0.04, double kappa = 0.6, int t_recover = 30) {
  SimParams p;
  p.n_agents = 10000;
  p.rho0 = rho0;
  p.kappa = kappa;
  p.t_infect = 30;
  p.t_recover = t_recover;
  p.dr = 0.001;
  p.n_iters = 500;
  return p;
}

}  // namespace

TEST(Prob, Examples) {
  EXPECT_EQ(prob_in_transition_region(0.0, 0.01, 1.0), 0.0);
  EXPECT_EQ(prob_in_transition_region(3.5, 0.2, 0.2), 1.0);
  // 40-digit reference: 0.39584372637906500478...
  EXPECT_NEAR(prob_in_transition_region(100, kPi * 0.04 * 0.04, 1.0), 0.395843726379065, 1e-13);
  EXPECT_THROW(prob_in_transition_region(1, 0.3, 0.2), std::domain_error);
}

TEST(Prob, RealExponent) {
  const double a = 0.01;
  EXPECT_NEAR(prob_in_transition_region(2.5, a, 1.0), 1.0 - std::exp(2.5 * std::log1p(-a)), 1e-15);
}

TEST(Global, TrivialFixedPoint) {
  const auto p = base();
  EXPECT_EQ(global_step({0, 0}, p), (GrrState{0, 0}));
}

TEST(Global, KappaOneLinear) {
  auto p = base();
  p.kappa = 1.0;
  const auto s = global_step({30, 0}, p);
  EXPECT_DOUBLE_EQ(s.i, 29.0);
  EXPECT_DOUBLE_EQ(s.r, 1.0);
}

TEST(Global, KappaOneClosedForm) {
  auto p = base();
  p.kappa = 1.0;
  p.n_iters = 200;
  const auto tr = global_trajectory(p);
  for (const auto& c : tr) {
    EXPECT_NEAR(c.i, std::pow(1.0 - 1.0 / 30, static_cast<double>(c.t)), 1e-12);
    if (c.t > 0) {
      EXPECT_LT(c.i, tr[c.t - 1].i);
    }
  }
}

TEST(Global, SingleElementTrajectory) {
  auto p = base();
  p.n_iters = 0;
  const auto tr = global_trajectory(p);
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_EQ(tr[0], (Counts{0, 9999, 1, 0}));
}

TEST(Global, StepFormula) {
  const auto p = base(0.02, 0.8, 45);
  const GrrState s{120.5, 300.25};
  const double mu = kPi * 0.02 * 0.02;
  const double h = (10000 - 120.5 - 300.25) * (1 - std::pow(1 - mu, 120.5)) * 0.2 + (29.0 / 30) * 120.5;
  const double g = 120.5 / 30 + (1 - 1.0 / 45) * 300.25;
  const auto n = global_step(s, p);
  EXPECT_NEAR(n.i, h, 1e-9);
  EXPECT_NEAR(n.r, g, 1e-9);
}

TEST(Front, Examples) {
  auto p = base();
  p.dr = 0.0;
  const auto f = front_radius_update({0.1, 0.1, false}, p);
  EXPECT_DOUBLE_EQ(f.zeta, 0.14);
  EXPECT_DOUBLE_EQ(f.zeta_prev, 0.1);

  p.dr = 0.001;
  const auto g = front_radius_update(FrontState::initial(p), p);
  EXPECT_NEAR(g.zeta, 0.04 + 0.041 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.zeta, 0.06899, 1e-5);
}

TEST(Front, SaturatesAndLatches) {
  const auto p = base(0.02);
  FrontState f = FrontState::initial(p);
  int t = 0;
  while (!f.saturated) {
    const auto g = front_radius_update(f, p);
    // Steps shrink towards 2 rho0 / 3 but never below rho0 / 2.
    EXPECT_GE(g.zeta - f.zeta, 0.5 * p.rho0);
    EXPECT_GE(g.zeta, g.zeta_prev);
    f = g;
    ASSERT_LT(++t, 100);
  }
  for (int k = 0; k < 10; ++k) {
    f = front_radius_update(f, p);
    EXPECT_TRUE(f.saturated);
    EXPECT_EQ(f.area(), 1.0);
  }
}

TEST(Local, SaturatedEqualsGlobal) {
  const auto p = base();
  const FrontState sat{0.7, 0.65, true};
  auto rng = rng_stream(3);
  for (int k = 0; k < 200; ++k) {
    const double i = rng.uniform() * 5000;
    const double r = rng.uniform() * (10000 - i);
    const auto l = local_step({i, r}, sat, p);
    EXPECT_EQ(l.state, global_step({i, r}, p));
    EXPECT_FALSE(l.clamped);
  }
}

TEST(Local, OriginStaysAtOrigin) {
  const auto p = base();
  const auto l = local_step({0, 0}, FrontState::initial(p), p);
  EXPECT_EQ(l.state, (GrrState{0, 0}));
}

TEST(Local, ClampedFrontReported) {
  const auto p = base();
  const auto l = local_step({1, 0}, {0.01, 0.0, false}, p);
  EXPECT_TRUE(l.clamped);
  // Front raised to one disk: the one infected covers it entirely.
  EXPECT_NEAR(l.state.i, 9999 * kPi * 0.0016 * 0.4 + 29.0 / 30, 1e-9);
}

TEST(Local, Boundedness) {
  auto rng = rng_stream(17);
  for (int k = 0; k < 2000; ++k) {
    auto p = base(0.005 + rng.uniform() * 0.3, rng.uniform(), 1 + static_cast<int>(rng.uniform() * 60));
    p.t_infect = 1 + static_cast<int>(rng.uniform() * 60);
    p.n_agents = 2 + static_cast<std::int64_t>(rng.uniform() * 20000);
    const double n = static_cast<double>(p.n_agents);
    const double i = rng.uniform() * n;
    const double r = rng.uniform() * (n - i);
    const FrontState f{rng.uniform() * 0.8, 0.0, false};
    for (const auto& s : {global_step({i, r}, p), local_step({i, r}, f, p).state}) {
      ASSERT_GE(s.i, 0.0);
      ASSERT_GE(s.r, 0.0);
      ASSERT_LE(s.i + s.r, n * (1 + 1e-12));
    }
  }
}

TEST(Local, ConservationAlongTrajectories) {
  for (auto v : {GrrVariant::Global, GrrVariant::Local, GrrVariant::Sparse}) {
    const auto tr = grr_trajectory(v, base(0.08, 0.8, 45));
    EXPECT_TRUE(is_well_formed(tr, 10000, 1e-9)) << to_string(v);
  }
}

TEST(Local, FrontsNondecreasing) {
  for (auto detailed : {local_trajectory_detailed(base(), 300), sparse_local_trajectory_detailed(base(), 300)}) {
    for (std::size_t t = 1; t < detailed.fronts.size(); ++t) {
      EXPECT_GE(detailed.fronts[t].zeta, detailed.fronts[t - 1].zeta);
      if (detailed.fronts[t - 1].saturated) {
        EXPECT_TRUE(detailed.fronts[t].saturated);
      }
    }
  }
}

TEST(Local, OnceSaturatedStepsMatchGlobal) {
  const auto p = base(0.04, 0.6);
  const auto lt = local_trajectory_detailed(p, 200);
  for (std::size_t t = 0; t + 1 < lt.counts.size(); ++t) {
    if (!lt.fronts[t].saturated) continue;
    const GrrState s{lt.counts[t].i, lt.counts[t].r};
    const auto g = global_step(s, p);
    EXPECT_EQ(lt.counts[t + 1].i, g.i);
    EXPECT_EQ(lt.counts[t + 1].r, g.r);
  }
}

TEST(Sparse, KappaOneOnlyDecay) {
  auto p = base();
  p.kappa = 1.0;
  const auto sparse = sparse_local_trajectory(p, 100);
  const auto local = local_trajectory_detailed(p, 100).counts;
  for (std::size_t t = 0; t < sparse.size(); ++t) {
    EXPECT_DOUBLE_EQ(sparse[t].i, local[t].i);
    EXPECT_NEAR(sparse[t].i, std::pow(29.0 / 30, static_cast<double>(t)), 1e-14);
  }
  // No new infections: the front never grows past its first step.
  const auto fronts = sparse_local_trajectory_detailed(p, 100).fronts;
  EXPECT_EQ(fronts.back().zeta, fronts[1].zeta);
}

TEST(Sparse, LongRunMatchesGlobal) {
  for (double kappa : {0.6, 0.8}) {
    const auto p = base(0.04, kappa);
    const auto g = global_trajectory([&] { auto q = p; q.n_iters = 5000; return q; }());
    const auto s = sparse_local_trajectory(p, 5000);
    EXPECT_NEAR(s.back().i, g.back().i, 1e-6 * 10000);
    EXPECT_NEAR(s.back().r, g.back().r, 1e-6 * 10000);
  }
}

TEST(Variant, ParseAndName) {
  for (auto v : {GrrVariant::Global, GrrVariant::Local, GrrVariant::Sparse})
    EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_THROW(parse_variant("other"), std::invalid_argument);
}
