#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "egrr/grr.hpp"
#include "oracles.hpp"

using namespace egrr;

TEST(MuA, TangencyIsZero) {
  EXPECT_EQ(sparse_mu_A(0.1, 0.06, 0.04, 8), 0.0);
  EXPECT_EQ(sparse_mu_A(0.1, 0.05, 0.04, 8), 0.0);
}

TEST(MuA, DegeneratePlacements) {
  EXPECT_DOUBLE_EQ(sparse_mu_A(0.05, 0.2, 0.04, 3), kPi * 0.04 * 0.04);
  EXPECT_DOUBLE_EQ(sparse_mu_A(0.01, 0.02, 0.04, 3), kPi * (0.04 * 0.04 - 0.01 * 0.01));
  EXPECT_THROW(sparse_mu_A(0.08, 0.06, 0.04, 0.5), std::domain_error);
}

TEST(MuA, MatchesLensMonteCarlo) {
  const auto mc = oracle::outer_lens(0.08, 0.06, 0.04, 4'000'000, 1);
  EXPECT_NEAR(sparse_mu_A(0.08, 0.06, 0.04, 8), mc.area, 1e-4);
  // The lens does not depend on how many agents share the ring.
  EXPECT_DOUBLE_EQ(sparse_mu_A(0.08, 0.06, 0.04, 8), sparse_mu_A(0.08, 0.06, 0.04, 1e9));
}

TEST(MuA, ScratchInvariants) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double zeta = 0.02 + 0.3 * u(gen), r = 0.4 * u(gen) + 1e-3, rho = 0.01 + 0.2 * u(gen);
    const double n = 1 + 40 * u(gen);
    GeomScratch a, o;
    sparse_mu_A(zeta, r, rho, n, &a);
    sparse_mu_overlap(zeta, r, rho, n, &o);
    EXPECT_GE(a.phi, 0.0);
    EXPECT_LE(a.phi, 2 * kPi);
    EXPECT_LE(a.alpha, rho * (1 + 1e-12));
    EXPECT_NEAR(a.theta, 2 * kPi / n, 1e-15);
    if (n >= 2) {
      EXPECT_NEAR(o.beta, 2 * r * std::sin(o.theta / 2), 1e-15);
    }
  }
}

TEST(Overlap, FarApartIsZero) {
  EXPECT_EQ(sparse_mu_overlap(0.08, 0.06, 0.001, 2), 0.0);
  EXPECT_EQ(sparse_mu_overlap(0.08, 0.06, 0.04, 1), 0.0);
}

TEST(Overlap, MatchesMonteCarlo) {
  const auto mc = oracle::pair_overlap(0.08, 0.06, 0.04, 6, 4'000'000, 2);
  EXPECT_NEAR(sparse_mu_overlap(0.08, 0.06, 0.04, 6), mc.area, 1e-4);
}

// Disk much larger than the front: the overlap wraps around underneath it.
TEST(Overlap, LargeDiskMatchesMonteCarlo) {
  const auto mc = oracle::pair_overlap(0.04, 0.03, 0.1, 5, 4'000'000, 3);
  EXPECT_NEAR(sparse_mu_overlap(0.04, 0.03, 0.1, 5), mc.area, 1e-4);
}

TEST(Overlap, NeverExceedsMuA) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 5000; ++k) {
    const double zeta = 0.02 + 0.3 * u(gen), r = 0.4 * u(gen) + 1e-3, rho = 0.01 + 0.2 * u(gen);
    const double n = 2 + 60 * u(gen);
    EXPECT_LE(sparse_mu_overlap(zeta, r, rho, n), sparse_mu_A(zeta, r, rho, n) * (1 + 1e-9) + 1e-15);
  }
}

TEST(Geometry, RandomGridMatchesMonteCarlo) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 12; ++k) {
    const double zeta = 0.02 + 0.3 * u(gen), zp = zeta * u(gen);
    const double r = std::sqrt((zeta * zeta + zp * zp) / 2), rho = 0.01 + 0.15 * u(gen);
    const double n = 2 + 38 * u(gen);
    const auto la = oracle::outer_lens(zeta, r, rho, 1'000'000, 100 + k);
    const auto lo = oracle::pair_overlap(zeta, r, rho, n, 1'000'000, 200 + k);
    EXPECT_NEAR(sparse_mu_A(zeta, r, rho, n), la.area, 1e-3);
    EXPECT_NEAR(sparse_mu_overlap(zeta, r, rho, n), lo.area, 1e-3);
  }
}

TEST(FrontUpdate, NoNewInfected) {
  SimParams p;
  p.rho0 = 0.04;
  const FrontState f{0.08, 0.04, false};
  double added = -1;
  const auto g = sparse_front_update(f, 0.0, p, &added);
  EXPECT_EQ(g.zeta, f.zeta);
  EXPECT_EQ(g.zeta_prev, f.zeta);
  EXPECT_EQ(added, 0.0);
}

TEST(FrontUpdate, FractionalCountActsAsOne) {
  SimParams p;
  p.rho0 = 0.04;
  const FrontState f{0.08, 0.04, false};
  EXPECT_EQ(sparse_front_update(f, 0.3, p).zeta, sparse_front_update(f, 1.0, p).zeta);
}

TEST(FrontUpdate, MatchesUnionMonteCarlo) {
  SimParams p;
  p.rho0 = 0.04;
  const FrontState f{0.08, 0.04, false};
  double added = 0.0;
  const auto g = sparse_front_update(f, 8.0, p, &added);
  const double r = std::sqrt((0.08 * 0.08 + 0.04 * 0.04) / 2);
  const double mu_a = sparse_mu_A(0.08, r, 0.04, 8), ov = sparse_mu_overlap(0.08, r, 0.04, 8);
  EXPECT_DOUBLE_EQ(g.zeta, std::sqrt((kPi * 0.08 * 0.08 + 8 * (mu_a - ov)) / kPi));
  const auto mc = oracle::ring_union(0.08, r, 0.04, 8, 4'000'000, 5);
  EXPECT_NEAR(added, mc.area, 1e-3);
}

TEST(FrontUpdate, InclusionExclusionOnDenseRings) {
  for (int n : {3, 12, 30}) {
    const double zeta = 0.1, r = 0.09, rho = 0.03;
    const double formula = n * (sparse_mu_A(zeta, r, rho, n) - sparse_mu_overlap(zeta, r, rho, n));
    const auto mc = oracle::ring_union(zeta, r, rho, n, 2'000'000, 40 + n);
    EXPECT_NEAR(formula, mc.area, 1e-3) << n;
  }
}

TEST(FrontUpdate, NoOverlapReducesToSum) {
  const double zeta = 0.2, r = 0.19, rho = 0.02;
  EXPECT_EQ(sparse_mu_overlap(zeta, r, rho, 4), 0.0);
  SimParams p;
  p.rho0 = rho;
  double added = 0.0;
  const double rr = std::sqrt((zeta * zeta + 0.18 * 0.18) / 2);
  sparse_front_update({zeta, 0.18, false}, 4.0, p, &added);
  EXPECT_DOUBLE_EQ(added, 4 * sparse_mu_A(zeta, rr, rho, 4));
}
