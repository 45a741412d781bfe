#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "ising_dephasing/correlators.hpp"
#include "oracles.hpp"

using namespace ising_dephasing;

namespace {

ModelParams zero_temperature(int N, double lambda, double g = 0.5) {
  ModelParams p;
  p.N = N;
  p.lambda = lambda;
  p.g = g;
  return p;
}

double sum_sin2_sq(const KGrid& grid) {
  double s = 0.0;
  for (const auto& m : grid.modes) s += m.sin2theta_sq();
  return s;
}

}  // namespace

// ---- first order ----------------------------------------------------------

TEST(C1, VanishesAtZeroField) {
  for (int N : {2, 8, 100, 1000}) {
    const auto p = zero_temperature(N, 0.0);
    EXPECT_LT(std::abs(c1(p, make_kgrid(p)).value), 1e-10 * N);
  }
}

TEST(C1, StrongFieldApproachesMinusN) {
  const auto p = zero_temperature(50, 1e7);
  EXPECT_NEAR(c1(p, make_kgrid(p)).value.real(), -50.0, 1e-4);
}

TEST(C1, MatchesDirectSummation) {
  const auto p = zero_temperature(4, 2.0);
  const auto value = c1(p, make_kgrid(p));
  EXPECT_EQ(value.order, 1);
  EXPECT_NEAR(value.value.real(), oracle::c1_direct(4, 2.0), 1e-14);
  EXPECT_EQ(value.value.imag(), 0.0);
}

// ---- second order ---------------------------------------------------------

TEST(C2Printed, EqualTimesCountModes) {
  const auto p = zero_temperature(30, 0.8);
  const auto grid = make_kgrid(p);
  EXPECT_DOUBLE_EQ(c2_irreducible(p, grid, 1.7, 1.7, SecondOrderKernel::AsPrinted).value.real(),
                   30.0);
}

TEST(C2Printed, FlatDispersionAtZeroField) {
  const auto p = zero_temperature(12, 0.0);
  const auto grid = make_kgrid(p);
  for (double tau : {0.0, 0.3, 1.1, 4.0})
    EXPECT_NEAR(c2_irreducible(p, grid, tau + 0.5, 0.5, SecondOrderKernel::AsPrinted).value.real(),
                12.0 * std::cos(4.0 * tau), 1e-12);
}

TEST(C2Printed, MatchesDirectSummation) {
  const auto p = zero_temperature(8, 0.5);
  const auto grid = make_kgrid(p);
  double expected = 0.0;
  for (double k : oracle::momenta(8))
    expected += std::cos(2.0 * 2.0 * std::sqrt(oracle::radicand(k, 0.5)) * 0.3);
  EXPECT_NEAR(c2_irreducible(p, grid, 0.3, 0.0, SecondOrderKernel::AsPrinted).value.real(),
              expected, 1e-13);
}

TEST(C2Consistent, EqualTimesGiveHalfWeightSum) {
  const auto p = zero_temperature(40, 0.6);
  const auto grid = make_kgrid(p);
  EXPECT_NEAR(c2_irreducible(p, grid, 2.0, 2.0).value.real(), 0.5 * sum_sin2_sq(grid), 1e-12);
}

TEST(C2Consistent, ZeroFieldValue) {
  // sum over k > 0 of sin^2 k = N/4
  const auto p = zero_temperature(16, 0.0);
  const auto grid = make_kgrid(p);
  EXPECT_NEAR(c2_irreducible(p, grid, 0.9, 0.4).value.real(), 4.0 * std::cos(4.0 * 0.5), 1e-12);
}

TEST(C2, StationaryAndEven) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> time(0.0, 5.0);
  for (auto kernel : {SecondOrderKernel::ExactConsistent, SecondOrderKernel::AsPrinted}) {
    const auto p = zero_temperature(24, 0.7);
    const auto grid = make_kgrid(p);
    // dyadic arguments: the shift is exact in floating point
    EXPECT_EQ(c2_irreducible(p, grid, 0.75 + 2.0, 0.25 + 2.0, kernel).value,
              c2_irreducible(p, grid, 0.75, 0.25, kernel).value);
    for (int i = 0; i < 20; ++i) {
      const double t1 = time(rng), t2 = time(rng), s = time(rng);
      const double base = c2_irreducible(p, grid, t1, t2, kernel).value.real();
      EXPECT_NEAR(c2_irreducible(p, grid, t1 + s, t2 + s, kernel).value.real(), base,
                  1e-12 * p.N);
      EXPECT_EQ(c2_irreducible(p, grid, t2, t1, kernel).value.real(), base);
      EXPECT_LE(std::abs(base), p.N);
    }
  }
}

TEST(C2, FullDecomposesIntoIrreducible) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lam(0.0, 2.5), time(0.0, 5.0);
  std::uniform_int_distribution<int> half(1, 40);
  for (int i = 0; i < 20; ++i) {
    auto p = zero_temperature(2 * half(rng), lam(rng));
    if (i % 2) p.beta = InverseTemperature::finite(0.5 + i);
    const auto grid = make_kgrid(p);
    const double t1 = time(rng), t2 = time(rng);
    const double first = c1(p, grid).value.real();
    const auto full = c2_full(p, grid, t1, t2).value;
    const auto irr = c2_irreducible(p, grid, t1, t2).value;
    EXPECT_LE(std::abs(full - first * first - irr), 1e-10 * std::max(1.0, std::abs(full)));
  }
}

TEST(C2, FullAtZeroFieldPrinted) {
  const auto p = zero_temperature(10, 0.0);
  const auto grid = make_kgrid(p);
  EXPECT_NEAR(c2_full(p, grid, 0.6, 0.1, SecondOrderKernel::AsPrinted).value.real(),
              10.0 * std::cos(2.0), 1e-10);
  const double first = c1(p, grid).value.real();
  EXPECT_NEAR(c2_full(p, grid, 1.2, 1.2, SecondOrderKernel::AsPrinted).value.real(),
              first * first + 10.0, 1e-12);
}

TEST(C2, LowTemperatureLimit) {
  for (double lambda : {0.5, 1.5, 2.0}) {
    auto hot = zero_temperature(60, lambda);
    hot.beta = InverseTemperature::finite(1e4);
    const auto cold = zero_temperature(60, lambda);
    const auto grid = make_kgrid(cold);
    double eps_min = 1e300;
    for (const auto& m : grid.modes) eps_min = std::min(eps_min, m.eps);
    const double bound = std::exp(-1e4 * eps_min) + 1e-15 * cold.N;
    EXPECT_NEAR(c1(hot, grid).value.real(), c1(cold, grid).value.real(), bound);
    for (auto kernel : {SecondOrderKernel::ExactConsistent, SecondOrderKernel::AsPrinted})
      EXPECT_NEAR(c2_irreducible(hot, grid, 1.3, 0.2, kernel).value.real(),
                  c2_irreducible(cold, grid, 1.3, 0.2, kernel).value.real(), bound);
  }
}

TEST(C2, FiniteTemperatureOccupations) {
  auto p = zero_temperature(6, 0.0);
  p.beta = InverseTemperature::finite(0.7);
  const auto grid = make_kgrid(p);
  const double n = 1.0 / (std::exp(0.7 * 2.0) + 1.0);
  EXPECT_NEAR(c1(p, grid).value.real(), -6.0 * 2.0 * n, 1e-12);
  EXPECT_NEAR(c2_irreducible(p, grid, 0.0, 0.0, SecondOrderKernel::AsPrinted).value.real(),
              6.0 * (n + 1.0) * (n + 1.0), 1e-12);
}

// ---- third order ----------------------------------------------------------

TEST(OrderingBrackets, StrictOrderings) {
  const auto b = ordering_brackets(3.0, 2.0, 1.0);
  EXPECT_EQ(b.b13, 1.0);
  EXPECT_EQ(b.b12, 0.0);
  EXPECT_EQ(b.b23, 1.0);
  // The bracket of the pair not containing the earliest time vanishes.
  const auto c = ordering_brackets(1.0, 3.0, 2.0);  // t1 earliest
  EXPECT_EQ(c.b23, 0.0);
  EXPECT_EQ(c.b13 + c.b12, 2.0);
}

TEST(C3, StrictOrderingValue) {
  const auto p = zero_temperature(14, 0.4);
  const auto grid = make_kgrid(p);
  const double t1 = 2.1, t2 = 1.4, t3 = 0.3;
  double expected = 0.0;
  for (const auto& m : grid.modes)
    expected -= m.sin2theta_sq() *
                (std::cos(2 * m.eps * (t1 - t3)) + std::cos(2 * m.eps * (t2 - t3)));
  EXPECT_NEAR(c3_irreducible(p, grid, t1, t2, t3).value.real(), expected, 1e-12);
}

TEST(C3, ZeroFieldStrictOrdering) {
  const int N = 20;
  const auto p = zero_temperature(N, 0.0);
  const auto grid = make_kgrid(p);
  const double sin_sq = oracle::weighted_sum_direct(N, 0.0, [](double) { return 1.0; });
  EXPECT_NEAR(sin_sq, N / 2.0, 1e-12);
  const double t1 = 1.5, t2 = 0.9, t3 = 0.2;
  EXPECT_NEAR(c3_irreducible(p, grid, t1, t2, t3).value.real(),
              -sin_sq * (std::cos(4 * (t1 - t3)) + std::cos(4 * (t2 - t3))), 1e-12);
}

TEST(C3, EqualTimeLimitFromAllOrderings) {
  const auto p = zero_temperature(32, 0.7);
  const auto grid = make_kgrid(p);
  const double t = 1.25;
  const double expected = -2.0 * sum_sin2_sq(grid);
  std::array<int, 3> offsets{-2, 0, 2};
  std::sort(offsets.begin(), offsets.end());
  do {
    double last = 0.0;
    for (double delta : {1e-3, 1e-5, 1e-7, 1e-9}) last = oracle::c3_along(p, grid, t, offsets, delta);
    EXPECT_NEAR(last, expected, 1e-9);
  } while (std::next_permutation(offsets.begin(), offsets.end()));
  EXPECT_NEAR(c3_irreducible(p, grid, t, t, t).value.real(), expected, 1e-12);
  // two coincident arguments
  EXPECT_NEAR(c3_irreducible(p, grid, t, t, 0.4).value.real(),
              c3_irreducible(p, grid, t + 1e-12, t, 0.4).value.real(), 1e-9);
  EXPECT_NEAR(c3_irreducible(p, grid, 0.4, t, t).value.real(),
              c3_irreducible(p, grid, 0.4, t, t - 1e-12).value.real(), 1e-9);
}

TEST(C3, PermutationSymmetryAndBound) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> time(0.0, 6.0);
  const auto p = zero_temperature(26, 1.3);
  const auto grid = make_kgrid(p);
  for (int i = 0; i < 20; ++i) {
    std::array<double, 3> t{time(rng), time(rng), time(rng)};
    const double base = c3_irreducible(p, grid, t[0], t[1], t[2]).value.real();
    EXPECT_LE(std::abs(base), 3.0 * sum_sin2_sq(grid) + 1e-12);
    std::array<int, 3> idx{0, 1, 2};
    while (std::next_permutation(idx.begin(), idx.end())) {
      const double v = c3_irreducible(p, grid, t[idx[0]], t[idx[1]], t[idx[2]]).value.real();
      EXPECT_LE(std::abs(v - base), 1e-12 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST(C3, RequiresZeroTemperature) {
  auto p = zero_temperature(8, 0.5);
  p.beta = InverseTemperature::finite(3.0);
  const auto grid = make_kgrid(p);
  EXPECT_THROW(c3_irreducible(p, grid, 1, 2, 3), UnsupportedParameter);
  EXPECT_THROW(c3_part(p, grid, 1, 2, 3), UnsupportedParameter);
}

TEST(C3Part, EqualTimesAtZeroField) {
  const auto p = zero_temperature(18, 0.0);
  const auto grid = make_kgrid(p);
  const auto v = c3_part(p, grid, 0.7, 0.7, 0.7).value;
  EXPECT_NEAR(v.real(), -18.0, 1e-10);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(C3Part, IndependentOfCoupling) {
  auto weak = zero_temperature(12, 0.6, 0.01);
  auto strong = zero_temperature(12, 0.6, 1.0);
  const auto grid = make_kgrid(weak);
  EXPECT_EQ(c3_part(weak, grid, 0.2, 0.5, 0.9).value, c3_part(strong, grid, 0.2, 0.5, 0.9).value);
}

TEST(C3Part, MatchesFourTermSummation) {
  const int N = 8;
  const double lambda = 0.5, t1 = 0.1, t2 = 0.2, t3 = 0.3;
  const auto p = zero_temperature(N, lambda);
  const double first = oracle::c1_direct(N, lambda);
  auto phase_sum = [&](double dt) {
    complex acc{};
    for (double k : oracle::momenta(N)) {
      const double r = oracle::radicand(k, lambda);
      const double eps = 2.0 * std::sqrt(r);
      acc += std::sin(k) * std::sin(k) / r * std::exp(complex(0.0, -2.0 * eps * dt));
    }
    return acc;
  };
  const complex expected = first * first * first + first * phase_sum(t1 - t2) +
                           first * phase_sum(t2 - t3) - 2.0 * phase_sum(t1 - t3);
  const auto v = c3_part(p, make_kgrid(p), t1, t2, t3).value;
  EXPECT_NEAR(v.real(), expected.real(), 1e-12);
  EXPECT_NEAR(v.imag(), expected.imag(), 1e-12);
}
