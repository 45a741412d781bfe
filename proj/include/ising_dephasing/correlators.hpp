#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "ising_dephasing/errors.hpp"
#include "ising_dephasing/model.hpp"

namespace ising_dephasing {

using complex = std::complex<double>;

/// Mode weighting of the second-order irreducible correlator.
///
/// ExactConsistent: sum over k > 0 of sin^2 2theta_k cos(2 eps_k tau). This is
///   the weighting that reproduces the g^2 Taylor coefficient of the exact
///   per-mode solution.
/// AsPrinted: unweighted sum over all N modes of cos(2 eps_k tau).
enum class SecondOrderKernel { ExactConsistent, AsPrinted };

inline constexpr SecondOrderKernel kDefaultSecondOrderKernel = SecondOrderKernel::ExactConsistent;

struct CorrelatorValue {
  complex value;
  int order;
  std::vector<double> times;
};

/// Calls f(mode, weight) for every mode entering the second-order sum.
template <class F>
void for_each_second_order_mode(const KGrid& grid, SecondOrderKernel kernel, F&& f) {
  if (kernel == SecondOrderKernel::AsPrinted) {
    for (const auto& m : grid.modes) f(m, 1.0);
  } else {
    for (const auto& m : grid.positive_modes) f(m, m.sin2theta_sq());
  }
}

/// First-order correlator sum_k (cos 2theta_k - 2 n_k). Time independent.
inline CorrelatorValue c1(const ModelParams& params, const KGrid& grid) {
  double sum = 0.0;
  for (const auto& m : grid.modes) sum += m.cos2theta - 2.0 * params.beta.occupation(m.eps);
  return {complex(sum, 0.0), 1, {}};
}

/// Second-order irreducible correlator; depends on t1 - t2 only.
inline CorrelatorValue c2_irreducible(const ModelParams& params, const KGrid& grid, double t1,
                                      double t2,
                                      SecondOrderKernel kernel = kDefaultSecondOrderKernel) {
  const double tau = t1 - t2;
  double sum = 0.0;
  for_each_second_order_mode(grid, kernel, [&](const KMode& m, double w) {
    const double thermal = params.beta.occupation(m.eps) + 1.0;
    sum += w * std::cos(2.0 * m.eps * tau) * thermal * thermal;
  });
  return {complex(sum, 0.0), 2, {t1, t2}};
}

/// Full second-order correlator, defined through c1^2 + c2_irreducible.
inline CorrelatorValue c2_full(const ModelParams& params, const KGrid& grid, double t1, double t2,
                               SecondOrderKernel kernel = kDefaultSecondOrderKernel) {
  const complex first = c1(params, grid).value;
  return {first * first + c2_irreducible(params, grid, t1, t2, kernel).value, 2, {t1, t2}};
}

/// Step-function brackets multiplying cos(2eps(t1-t3)), cos(2eps(t1-t2)) and
/// cos(2eps(t2-t3)) in the third-order kernel.
struct OrderingBrackets {
  double b13;
  double b12;
  double b23;
};

/// Evaluates the brackets 1 - theta()theta() - theta()theta(). Equal times are
/// ordered by argument position (t_i counts as later than t_j for i < j), i.e.
/// a tie takes the value of an adjacent strict ordering. The kernel is
/// continuous across ties so every such choice gives the same correlator.
inline OrderingBrackets ordering_brackets(double t1, double t2, double t3) {
  const std::array<double, 3> t{t1, t2, t3};
  auto step = [&](int i, int j) -> double {  // theta(t_i - t_j), 0-based
    return (t[i] > t[j] || (t[i] == t[j] && i < j)) ? 1.0 : 0.0;
  };
  return {1.0 - step(2, 0) * step(0, 1) - step(0, 2) * step(2, 1),
          1.0 - step(1, 0) * step(0, 2) - step(0, 1) * step(1, 2),
          1.0 - step(2, 1) * step(1, 0) - step(1, 2) * step(2, 0)};
}

inline void require_zero_temperature(const ModelParams& params, const char* what) {
  if (!params.beta.is_infinite())
    throw UnsupportedParameter(std::string(what) + " is only available at infinite beta");
}

/// Third-order irreducible correlator at zero temperature.
inline CorrelatorValue c3_irreducible(const ModelParams& params, const KGrid& grid, double t1,
                                      double t2, double t3) {
  require_zero_temperature(params, "c3_irreducible");
  const auto b = ordering_brackets(t1, t2, t3);
  double sum = 0.0;
  for (const auto& m : grid.modes) {
    const double w = 2.0 * m.eps;
    double bracket = 0.0;
    if (b.b13 != 0.0) bracket += b.b13 * std::cos(w * (t1 - t3));
    if (b.b12 != 0.0) bracket += b.b12 * std::cos(w * (t1 - t2));
    if (b.b23 != 0.0) bracket += b.b23 * std::cos(w * (t2 - t3));
    sum -= m.sin2theta_sq() * bracket;
  }
  return {complex(sum, 0.0), 3, {t1, t2, t3}};
}

/// Zero-temperature tr(B(t3) B(t2) B(t1) rho_B); building block for the
/// time-ordered third-order correlator. Complex valued.
inline CorrelatorValue c3_part(const ModelParams& params, const KGrid& grid, double t1, double t2,
                               double t3) {
  require_zero_temperature(params, "c3_part");
  const double first = c1(params, grid).value.real();
  complex s12{}, s23{}, s13{};
  for (const auto& m : grid.modes) {
    const double w = 2.0 * m.eps;
    const double s2 = m.sin2theta_sq();
    s12 += s2 * std::polar(1.0, -w * (t1 - t2));
    s23 += s2 * std::polar(1.0, -w * (t2 - t3));
    s13 += s2 * std::polar(1.0, -w * (t1 - t3));
  }
  const complex value = first * first * first + first * s12 + first * s23 - 2.0 * s13;
  return {value, 3, {t1, t2, t3}};
}

}  // namespace ising_dephasing
