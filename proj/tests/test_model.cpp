#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ising_dephasing/model.hpp"
#include "oracles.hpp"

using namespace ising_dephasing;
using std::numbers::pi;

TEST(KGrid, SmallGridAtZeroField) {
  const auto grid = make_kgrid(4, 0.0);
  ASSERT_EQ(grid.modes.size(), 4u);
  ASSERT_EQ(grid.positive_modes.size(), 2u);
  const double expected[] = {-3 * pi / 4, -pi / 4, pi / 4, 3 * pi / 4};
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(grid.modes[i].k, expected[i]);
    EXPECT_DOUBLE_EQ(grid.modes[i].eps, 2.0);
  }
}

TEST(KGrid, DispersionSubstitution) {
  const auto grid = make_kgrid(4, 2.0);
  const auto& m = grid.positive_modes.back();
  EXPECT_DOUBLE_EQ(m.k, 3 * pi / 4);
  EXPECT_NEAR(m.eps, 2.0 * std::sqrt(5.0 + 2.0 * std::sqrt(2.0)), 1e-14);
}

TEST(KGrid, CriticalFieldGapIsFiniteOnFiniteGrid) {
  const int N = 10000;
  const auto grid = make_kgrid(N, 1.0);
  double smallest = 1e300;
  for (const auto& m : grid.modes) smallest = std::min(smallest, m.eps);
  // 2 sqrt(2 - 2 cos(pi/N)), written without the cancellation
  const double expected = 4.0 * std::sin(pi / (2 * N));
  EXPECT_GT(smallest, 0.0);
  EXPECT_NEAR(smallest, expected, 1e-12 * expected + 1e-15);
}

TEST(KGrid, PositiveModesSortedAndCounted) {
  const auto grid = make_kgrid(100, 0.7);
  ASSERT_EQ(grid.positive_modes.size(), 50u);
  EXPECT_TRUE(std::is_sorted(grid.positive_modes.begin(), grid.positive_modes.end(),
                             [](const KMode& a, const KMode& b) { return a.k < b.k; }));
  for (const auto& m : grid.positive_modes) EXPECT_GT(m.k, 0.0);
}

TEST(KGrid, RejectsInvalidParameters) {
  EXPECT_THROW(make_kgrid(5, 0.5), ConfigError);
  EXPECT_THROW(make_kgrid(0, 0.5), ConfigError);
  EXPECT_THROW(make_kgrid(-4, 0.5), ConfigError);
  EXPECT_THROW(make_kgrid(4, -0.1), ConfigError);
  ModelParams p;
  p.N = 7;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_THROW(InverseTemperature::finite(-1.0), ConfigError);
}

TEST(KGrid, PairedModesAreSymmetric) {
  for (double lambda : {0.0, 0.3, 0.97, 1.0, 2.5}) {
    const auto grid = make_kgrid(64, lambda);
    const std::size_t n = grid.modes.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = grid.modes[i];
      const auto& b = grid.modes[n - 1 - i];
      EXPECT_EQ(a.k, -b.k);
      EXPECT_EQ(a.eps, b.eps);
      EXPECT_EQ(a.cos2theta, b.cos2theta);
      EXPECT_EQ(a.sin2theta_sq(), b.sin2theta_sq());
    }
  }
}

TEST(KGrid, ModeInvariants) {
  for (int N : {2, 8, 100, 1000})
    for (double lambda : {0.0, 0.5, 0.97, 1.0, 2.0, 7.5}) {
      const auto grid = make_kgrid(N, lambda);
      for (const auto& m : grid.modes) {
        EXPECT_NEAR(m.cos2theta * m.cos2theta + m.sin2theta * m.sin2theta, 1.0, 1e-12);
        const double naive = 1.0 - 2.0 * lambda * std::cos(m.k) + lambda * lambda;
        EXPECT_NEAR(m.eps * m.eps, 4.0 * naive, 1e-14 * (1.0 + lambda) * (1.0 + lambda));
        EXPECT_GE(m.eps, 2.0 * std::abs(1.0 - lambda) - 1e-14);
        EXPECT_GT(m.eps, 0.0);
      }
    }
}

TEST(KGrid, FlatDispersionAndVanishingAngleSumAtZeroField) {
  for (int N : {4, 10, 1000, 10000}) {
    const auto grid = make_kgrid(N, 0.0);
    double sum = 0.0;
    for (const auto& m : grid.modes) {
      EXPECT_NEAR(m.eps, 2.0, 1e-15);
      sum += m.cos2theta;
    }
    EXPECT_LT(std::abs(sum), 1e-10 * N);
  }
}

TEST(BogoliubovAngles, ZeroFieldReducesToTrigonometry) {
  for (double k : {-2.9, -0.4, 0.1, 1.3, 3.0}) {
    const auto a = bogoliubov_angles(k, 0.0);
    EXPECT_DOUBLE_EQ(a.cos2theta, std::cos(k));
    EXPECT_DOUBLE_EQ(a.sin2theta, std::sin(k));
  }
}

TEST(BogoliubovAngles, CriticalFieldQuarterTurn) {
  const auto a = bogoliubov_angles(pi / 2, 1.0);
  EXPECT_NEAR(a.cos2theta, -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a.sin2theta, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(BogoliubovAngles, StrongFieldLimit) {
  const auto a = bogoliubov_angles(0.8, 1e8);
  EXPECT_NEAR(a.cos2theta, -1.0, 1e-7);
  EXPECT_NEAR(a.sin2theta, 0.0, 1e-7);
}

TEST(BogoliubovAngles, QuadrantFollowsQuotientForm) {
  // tan 2theta alone cannot tell these apart.
  const auto a = bogoliubov_angles(2.5, 0.2);
  EXPECT_LT(a.cos2theta, 0.0);
  EXPECT_GT(a.sin2theta, 0.0);
  const auto b = bogoliubov_angles(-2.5, 0.2);
  EXPECT_LT(b.cos2theta, 0.0);
  EXPECT_LT(b.sin2theta, 0.0);
}

TEST(BogoliubovAngles, DegenerateAtGaplessPoint) {
  EXPECT_THROW(bogoliubov_angles(0.0, 1.0), DegenerateInput);
}

TEST(BogoliubovAngles, AgreesWithDirectEvaluation) {
  for (double lambda : {0.0, 0.5, 2.0}) {
    const auto ks = oracle::momenta(16);
    for (double k : ks) {
      const auto a = bogoliubov_angles(k, lambda);
      const double r = std::sqrt(oracle::radicand(k, lambda));
      EXPECT_NEAR(a.cos2theta, (std::cos(k) - lambda) / r, 1e-15);
      EXPECT_NEAR(a.sin2theta, std::sin(k) / r, 1e-15);
    }
  }
}
