#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "ising_dephasing/correlators.hpp"
#include "ising_dephasing/cumulant.hpp"
#include "ising_dephasing/errors.hpp"
#include "ising_dephasing/model.hpp"

namespace ising_dephasing {

/// Per-pair vacuum overlap <0|exp(-it(H_k + gB_k)) exp(it(H_k - gB_k))|0> by
/// direct exponentiation of the two 2x2 generators in the {|0,0>, |1,1>}
/// quasiparticle basis of the (k, -k) pair:
///
///   H_k +- g B_k = [[-eps, +-i g s], [-+i g s, eps -+ 4g]],  s = sin 2theta_k.
inline complex mode_overlap_oracle(const KMode& mode, double g, double t) {
  using Eigen::Matrix2cd;
  const complex i(0.0, 1.0);
  const double eps = mode.eps;
  const double s = mode.sin2theta;

  Matrix2cd plus, minus;
  plus << -eps, i * g * s, -i * g * s, eps - 4.0 * g;
  minus << -eps, -i * g * s, i * g * s, eps + 4.0 * g;

  auto propagator = [](const Matrix2cd& h, double time) {
    Eigen::SelfAdjointEigenSolver<Matrix2cd> solver(h);
    const auto& v = solver.eigenvectors();
    Eigen::Vector2cd phases;
    for (int j = 0; j < 2; ++j) phases(j) = std::polar(1.0, -time * solver.eigenvalues()(j));
    return Matrix2cd(v * phases.asDiagonal() * v.adjoint());
  };
  const Matrix2cd product = propagator(plus, t) * propagator(minus, -t);
  return product(0, 0);
}

enum class OverlapForm {
  /// Coefficients derived from the Pauli-vector product, including the
  /// exp(4igt) trace phase. Agrees with mode_overlap_oracle.
  Corrected,
  /// The historical closed form with middle coefficient (eps^2 - sin^2 2theta)
  /// and imaginary prefactor eps. Violates overlap = 1 at g = 0; kept for
  /// comparison only.
  AsPrinted,
};

namespace detail {
inline double sin_over(double x, double t) {
  // sin(x t) / x, finite as x -> 0
  const double y = x * t;
  if (std::abs(y) < 1e-8) return t * (1.0 - y * y / 6.0);
  return std::sin(y) / x;
}
}  // namespace detail

inline complex mode_overlap_closed_form(const KMode& mode, double g, double t,
                                        OverlapForm form = OverlapForm::Corrected) {
  const double eps = mode.eps;
  const double s = mode.sin2theta;
  const double gs = g * s;
  const double a = std::sqrt(gs * gs + (2.0 * g - eps) * (2.0 * g - eps));
  const double b = std::sqrt(gs * gs + (2.0 * g + eps) * (2.0 * g + eps));
  const double ca = std::cos(t * a), cb = std::cos(t * b);
  const double sa = detail::sin_over(a, t), sb = detail::sin_over(b, t);  // sin(ta)/a, sin(tb)/b

  if (form == OverlapForm::AsPrinted) {
    return {ca * cb + (eps * eps - s * s) * sa * sb, eps * (sa * cb - ca * sb)};
  }
  const complex pauli(ca * cb + (eps * eps - 4.0 * g * g - gs * gs) * sa * sb,
                      (eps - 2.0 * g) * sa * cb - (eps + 2.0 * g) * ca * sb);
  return std::polar(1.0, 4.0 * g * t) * pauli;
}

/// Largest |closed form - oracle| over the given modes and times.
inline double closed_form_deviation(std::span<const KMode> modes, double g,
                                    std::span<const double> times,
                                    OverlapForm form = OverlapForm::Corrected) {
  double worst = 0.0;
  for (const auto& m : modes)
    for (double t : times)
      worst = std::max(worst, std::abs(mode_overlap_closed_form(m, g, t, form) -
                                       mode_overlap_oracle(m, g, t)));
  return worst;
}

inline constexpr double kCertificationTolerance = 1e-10;
inline constexpr double kMinOverlap = 1e-12;

/// Exact decoherence exponent on a time grid.
///
/// `gamma` follows rho_{down,up}(t) = e^{gamma} rho_{down,up}(0) with the
/// deterministic factor exp(-2it(omega0 + g c1)) split off into
/// `deterministic_phase`.
struct DecoherenceCurve {
  std::vector<double> times;
  std::vector<complex> gamma;
  std::vector<complex> deterministic_phase;
  ModelParams meta;
  bool used_oracle = false;  // closed form failed certification
};

inline DecoherenceCurve gamma_exact(const ModelParams& params, const KGrid& grid,
                                    const std::vector<double>& times) {
  require_zero_temperature(params, "gamma_exact");
  validate_times(times);

  DecoherenceCurve curve;
  curve.times = times;
  curve.meta = params;
  curve.gamma.assign(times.size(), complex{});

  const std::array<double, 2> probe{times[times.size() / 2], times.back()};
  curve.used_oracle =
      closed_form_deviation(grid.positive_modes, params.g, probe) > kCertificationTolerance;

  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (const auto& m : grid.positive_modes) {
    double previous_phase = 0.0;  // overlap is 1 at t = 0
    for (std::size_t i = 0; i < times.size(); ++i) {
      const complex overlap = curve.used_oracle
                                  ? mode_overlap_oracle(m, params.g, times[i])
                                  : mode_overlap_closed_form(m, params.g, times[i]);
      const double modulus = std::abs(overlap);
      if (modulus < kMinOverlap) {
        std::ostringstream msg;
        msg << "overlap vanishes (|A| = " << modulus << ") for k=" << m.k << " at t=" << times[i]
            << "; logarithm branch cannot be tracked";
        throw NumericalError(msg.str());
      }
      double phase = std::arg(overlap);
      phase += two_pi * std::round((previous_phase - phase) / two_pi);
      previous_phase = phase;
      curve.gamma[i] += complex(std::log(modulus), phase);
    }
  }

  const double first = c1(params, grid).value.real();
  curve.deterministic_phase.reserve(times.size());
  for (double t : times)
    curve.deterministic_phase.emplace_back(0.0, -2.0 * t * (params.omega0 + params.g * first));
  return curve;
}

/// The exact exponent in the convention of the cumulant series: the series
/// describes rho_{10} = conj(rho_{down,up}) and includes the first-order
/// g c1 phase but not omega0.
inline std::vector<complex> series_convention(const DecoherenceCurve& curve, const KGrid& grid) {
  const double first = c1(curve.meta, grid).value.real();
  std::vector<complex> out;
  out.reserve(curve.times.size());
  for (std::size_t i = 0; i < curve.times.size(); ++i)
    out.push_back(std::conj(curve.gamma[i]) +
                  complex(0.0, 2.0 * curve.meta.g * curve.times[i] * first));
  return out;
}

}  // namespace ising_dephasing
