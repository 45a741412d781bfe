#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <thread>
#include <vector>

#include "ising_dephasing/correlators.hpp"
#include "ising_dephasing/errors.hpp"
#include "ising_dephasing/model.hpp"
#include "ising_dephasing/quadrature.hpp"

namespace ising_dephasing {

/// Per-order contributions to the decoherence exponent at one time.
struct CumulantTerms {
  double t = 0.0;
  complex gamma1{};
  complex gamma2{};
  complex gamma3{};
  complex truncated_sum{};
};

inline std::vector<double> uniform_times(double t_max, int steps) {
  if (steps < 2) throw ConfigError("t_steps must be >= 2");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be positive");
  std::vector<double> times(steps);
  for (int i = 0; i < steps; ++i) times[i] = t_max * i / (steps - 1);
  return times;
}

inline void validate_times(const std::vector<double>& times) {
  if (times.empty()) throw ConfigError("time grid is empty");
  if (!(times.front() >= 0.0)) throw ConfigError("time grid must start at t >= 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ConfigError("time grid must be strictly increasing");
}

inline void validate_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("evolution time must be finite and >= 0");
}

/// 2 (ig) t c1.
inline complex gamma_order1(const ModelParams& params, const KGrid& grid, double t) {
  validate_time(t);
  return complex(0.0, 2.0 * params.g * t) * c1(params, grid).value;
}

/// (2^2/2!) (ig)^2 times the square integral of the second-order kernel, in
/// closed form: -2 g^2 sum_k w_k (n_k+1)^2 sin^2(eps_k t) / eps_k^2.
inline complex gamma_order2(const ModelParams& params, const KGrid& grid, double t,
                            SecondOrderKernel kernel = kDefaultSecondOrderKernel) {
  validate_time(t);
  double sum = 0.0;
  for_each_second_order_mode(grid, kernel, [&](const KMode& m, double w) {
    const double thermal = params.beta.occupation(m.eps) + 1.0;
    const double s = std::sin(m.eps * t) / m.eps;
    sum += w * thermal * thermal * s * s;
  });
  return complex(-2.0 * params.g * params.g * sum, 0.0);
}

namespace detail {

// Integrals of cos(w (t_a - t_b)) over the ordered simplex t > x > y > z > 0.
//   outer pair (max - min):  P = int_0^t u (t-u) cos(wu) du
//   adjacent pair:           Q = int_0^t (t-u)^2/2 cos(wu) du
inline double simplex_outer_pair(double w, double t) {
  const double x = w * t;
  if (std::abs(x) < 0.5) {
    // t^3 sum_{n>=1} (-1)^n (1-2n) x^{2n-2} / (2n+1)!
    double term_scale = 1.0 / 6.0;  // 1/(2n+1)! at n = 1
    double xpow = 1.0;
    double sum = 0.0;
    for (int n = 1; n <= 12; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      sum += sign * (1.0 - 2.0 * n) * xpow * term_scale;
      xpow *= x * x;
      term_scale /= (2.0 * n + 2.0) * (2.0 * n + 3.0);
    }
    return t * t * t * sum;
  }
  return (2.0 * std::sin(x) - x - x * std::cos(x)) / (w * w * w);
}

inline double simplex_adjacent_pair(double w, double t) {
  const double x = w * t;
  if (std::abs(x) < 0.5) {
    // t^3 sum_{n>=1} (-1)^{n+1} x^{2n-2} / (2n+1)!
    double term_scale = 1.0 / 6.0;
    double xpow = 1.0;
    double sum = 0.0;
    for (int n = 1; n <= 12; ++n) {
      const double sign = (n % 2 == 0) ? -1.0 : 1.0;
      sum += sign * xpow * term_scale;
      xpow *= x * x;
      term_scale /= (2.0 * n + 2.0) * (2.0 * n + 3.0);
    }
    return t * t * t * sum;
  }
  return (x - std::sin(x)) / (w * w * w);
}

/// Bracket weights summed over the six strict orderings of (t1, t2, t3), split
/// by whether the bracketed pair spans the outermost times of the ordering.
struct SimplexWeights {
  double outer = 0.0;
  double adjacent = 0.0;
};

inline SimplexWeights simplex_weights() {
  static const SimplexWeights weights = [] {
    SimplexWeights acc;
    std::array<int, 3> perm{0, 1, 2};  // perm[r] = argument index holding rank r (0 = latest)
    do {
      std::array<double, 3> rep{};
      for (int r = 0; r < 3; ++r) rep[perm[r]] = 3.0 - r;
      const auto b = ordering_brackets(rep[0], rep[1], rep[2]);
      const std::array<std::pair<std::array<int, 2>, double>, 3> pairs{
          {{{0, 2}, b.b13}, {{0, 1}, b.b12}, {{1, 2}, b.b23}}};
      for (const auto& [idx, bracket] : pairs) {
        const bool outer = (idx[0] == perm[0] || idx[1] == perm[0]) &&
                           (idx[0] == perm[2] || idx[1] == perm[2]);
        (outer ? acc.outer : acc.adjacent) += bracket;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
  }();
  return weights;
}

inline complex order3_prefactor(double g) {
  // (2^3 / 3!) (i g)^3
  return complex(0.0, -4.0 / 3.0 * g * g * g);
}

}  // namespace detail

/// Cube integral of the third-order kernel by simplex decomposition: on each
/// strict ordering the brackets are constant and each cosine integrates in
/// closed form.
inline double order3_cube_integral_simplex(const KGrid& grid, double t) {
  const auto weights = detail::simplex_weights();
  double sum = 0.0;
  for (const auto& m : grid.modes) {
    const double w = 2.0 * m.eps;
    sum -= m.sin2theta_sq() * (weights.outer * detail::simplex_outer_pair(w, t) +
                               weights.adjacent * detail::simplex_adjacent_pair(w, t));
  }
  return sum;
}

/// Cube integral of the third-order kernel by iterated Gauss-Legendre
/// quadrature directly over [0,t]^3. The inner variables are split into
/// panels at the kink planes t_i = t_j; `points` nodes per dimension in total
/// (points on t1, points/2 per t2 panel, points/3 per t3 panel).
inline double order3_cube_integral_quadrature(const KGrid& grid, double t, int points,
                                              unsigned threads = 0) {
  if (points < 8) throw ConfigError("quadrature_points must be >= 8");
  if (t == 0.0) return 0.0;
  const auto& rule1 = gauss_legendre(points);
  const auto& rule2 = gauss_legendre((points + 1) / 2);
  const auto& rule3 = gauss_legendre((points + 2) / 3);

  std::vector<double> freq, weight;
  for (const auto& m : grid.modes) {
    freq.push_back(2.0 * m.eps);
    weight.push_back(m.sin2theta_sq());
  }

  auto kernel = [&](double t1, double t2, double t3) {
    const auto b = ordering_brackets(t1, t2, t3);
    double sum = 0.0;
    for (std::size_t i = 0; i < freq.size(); ++i) {
      double bracket = 0.0;
      if (b.b13 != 0.0) bracket += b.b13 * std::cos(freq[i] * (t1 - t3));
      if (b.b12 != 0.0) bracket += b.b12 * std::cos(freq[i] * (t1 - t2));
      if (b.b23 != 0.0) bracket += b.b23 * std::cos(freq[i] * (t2 - t3));
      sum -= weight[i] * bracket;
    }
    return sum;
  };

  auto plane = [&](double t1) {
    double acc2 = 0.0;
    for (const auto& [a2, b2] : {std::pair{0.0, t1}, std::pair{t1, t}}) {
      rule2.apply(a2, b2, [&](double t2, double w2) {
        const double lo = std::min(t1, t2), hi = std::max(t1, t2);
        double acc3 = 0.0;
        for (const auto& [a3, b3] : {std::pair{0.0, lo}, std::pair{lo, hi}, std::pair{hi, t}})
          rule3.apply(a3, b3, [&](double t3, double w3) { acc3 += w3 * kernel(t1, t2, t3); });
        acc2 += w2 * acc3;
      });
    }
    return acc2;
  };

  // One slot per outer node, summed serially afterwards: the result does not
  // depend on the thread count.
  std::vector<double> x1, w1, slots(rule1.nodes.size(), 0.0);
  rule1.apply(0.0, t, [&](double x, double w) {
    x1.push_back(x);
    w1.push_back(w);
  });
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(x1.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < threads; ++id)
      pool.emplace_back([&, id] {
        for (std::size_t i = id; i < x1.size(); i += threads) slots[i] = w1[i] * plane(x1[i]);
      });
  }
  double total = 0.0;
  for (double s : slots) total += s;
  return total;
}

struct Order3Options {
  int quadrature_points = 128;
  /// Cross-check the simplex result against the cube quadrature, doubling the
  /// resolution until two successive refinements agree to 1e-8 relative.
  bool verify = false;
  int max_points = 1024;
};

/// (2^3/3!) (ig)^3 times the cube integral of the third-order kernel.
inline complex gamma_order3(const ModelParams& params, const KGrid& grid, double t,
                            const Order3Options& options = {}) {
  validate_time(t);
  require_zero_temperature(params, "gamma_order3");
  if (options.quadrature_points < 8) throw ConfigError("quadrature_points must be >= 8");

  const double simplex = order3_cube_integral_simplex(grid, t);
  if (options.verify && t > 0.0) {
    int n = options.quadrature_points;
    double previous = order3_cube_integral_quadrature(grid, t, n);
    double current = previous;
    bool converged = false;
    while (2 * n <= options.max_points) {
      n *= 2;
      current = order3_cube_integral_quadrature(grid, t, n);
      if (std::abs(current - previous) <= 1e-8 * std::abs(current)) {
        converged = true;
        break;
      }
      previous = current;
    }
    const double tolerance = std::max(1e-8, 1e-2 / (static_cast<double>(n) * n));
    if (!converged || std::abs(simplex - current) > tolerance * std::abs(current)) {
      std::ostringstream msg;
      msg << "third-order quadrature did not converge at t=" << t << " (simplex " << simplex
          << ", cube " << current << " at " << n << " points)";
      throw NumericalError(msg.str());
    }
  }
  return detail::order3_prefactor(params.g) * simplex;
}

struct SeriesOptions {
  SecondOrderKernel kernel = kDefaultSecondOrderKernel;
  Order3Options order3{};
};

/// Truncated cumulant series on a time grid. Orders above max_order are zero.
inline std::vector<CumulantTerms> gamma_series(const ModelParams& params, const KGrid& grid,
                                               const std::vector<double>& times, int max_order,
                                               const SeriesOptions& options = {}) {
  validate_times(times);
  if (max_order < 1 || max_order > 3) throw ConfigError("max_order must be 1, 2 or 3");
  std::vector<CumulantTerms> out;
  out.reserve(times.size());
  for (double t : times) {
    CumulantTerms terms;
    terms.t = t;
    terms.gamma1 = gamma_order1(params, grid, t);
    if (max_order >= 2) terms.gamma2 = gamma_order2(params, grid, t, options.kernel);
    if (max_order >= 3) terms.gamma3 = gamma_order3(params, grid, t, options.order3);
    terms.truncated_sum = terms.gamma1 + terms.gamma2 + terms.gamma3;
    out.push_back(terms);
  }
  return out;
}

}  // namespace ising_dephasing
