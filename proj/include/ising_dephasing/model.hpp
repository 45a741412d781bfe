#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ising_dephasing/errors.hpp"

namespace ising_dephasing {

/// Inverse temperature; an empty value is the zero-temperature limit.
class InverseTemperature {
 public:
  static constexpr InverseTemperature infinite() { return InverseTemperature{}; }
  static InverseTemperature finite(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw ConfigError("inverse temperature must be a finite positive number");
    InverseTemperature b;
    b.value_ = beta;
    return b;
  }

  constexpr bool is_infinite() const { return !value_.has_value(); }
  double value() const { return *value_; }

  /// Fermi occupation 1/(e^{beta*eps}+1); zero at infinite beta.
  double occupation(double eps) const {
    if (is_infinite()) return 0.0;
    return 1.0 / (std::exp(*value_ * eps) + 1.0);
  }

 private:
  constexpr InverseTemperature() = default;
  std::optional<double> value_;
};

/// Physical and numerical parameters of the qubit + transverse-field Ising
/// bath. The coupling is sigma^z (x) (-g sigma^z_j) on every bath site.
struct ModelParams {
  int N = 1000;           // bath sites, even
  double lambda = 0.5;    // transverse field
  double g = 0.01;        // qubit-bath coupling
  double omega0 = 0.0;    // qubit splitting; enters only the deterministic phase
  InverseTemperature beta = InverseTemperature::infinite();

  void validate() const {
    if (N < 2 || N % 2 != 0)
      throw ConfigError("N must be an even integer >= 2, got " + std::to_string(N));
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
      throw ConfigError("lambda must be a finite non-negative number");
    if (!std::isfinite(g)) throw ConfigError("g must be finite");
    if (!std::isfinite(omega0)) throw ConfigError("omega0 must be finite");
  }
};

struct BogoliubovAngles {
  double cos2theta;
  double sin2theta;
};

inline constexpr double kMinRadicand = 1e-300;

// 1 - 2 lambda cos k + lambda^2, rearranged so that nothing cancels near
// lambda = 1, k = 0.
inline double dispersion_radicand(double k, double lambda) {
  const double half = std::sin(0.5 * k);
  return (1.0 - lambda) * (1.0 - lambda) + 4.0 * lambda * half * half;
}

/// eps_k = 2 sqrt(1 - 2 lambda cos k + lambda^2).
inline double dispersion(double k, double lambda) {
  return 2.0 * std::sqrt(dispersion_radicand(k, lambda));
}

/// cos 2theta_k and sin 2theta_k from the quotient forms. Going through
/// tan 2theta would lose the quadrant.
inline BogoliubovAngles bogoliubov_angles(double k, double lambda) {
  const double radicand = dispersion_radicand(k, lambda);
  if (!(radicand >= kMinRadicand))
    throw DegenerateInput("Bogoliubov angle undefined: 1 - 2 lambda cos k + lambda^2 underflows");
  const double root = std::sqrt(radicand);
  return {(std::cos(k) - lambda) / root, std::sin(k) / root};
}

/// One Brillouin-zone mode with its closed-form single-particle data.
struct KMode {
  double k;
  double eps;
  double cos2theta;
  double sin2theta;

  double sin2theta_sq() const { return sin2theta * sin2theta; }
};

inline KMode make_mode(double k, double lambda) {
  const auto angles = bogoliubov_angles(k, lambda);
  return {k, dispersion(k, lambda), angles.cos2theta, angles.sin2theta};
}

/// Antiperiodic momenta k = +-(2l-1) pi / N, l = 1..N/2.
///
/// `modes` holds all N momenta in ascending k; `positive_modes` the N/2 with
/// k > 0, also ascending. Correlator sums run over `modes`, the exact
/// solution's per-pair product over `positive_modes`.
struct KGrid {
  std::vector<KMode> modes;
  std::vector<KMode> positive_modes;

  std::size_t size() const { return modes.size(); }
};

inline KGrid make_kgrid(int N, double lambda) {
  if (N < 2 || N % 2 != 0)
    throw ConfigError("N must be an even integer >= 2, got " + std::to_string(N));
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("lambda must be a finite non-negative number");

  const int half = N / 2;
  KGrid grid;
  grid.positive_modes.reserve(half);
  for (int l = 1; l <= half; ++l) {
    const double k = (2.0 * l - 1.0) * std::numbers::pi / N;
    grid.positive_modes.push_back(make_mode(k, lambda));
  }
  grid.modes.reserve(N);
  for (int l = half; l >= 1; --l) {
    const double k = -(2.0 * l - 1.0) * std::numbers::pi / N;
    grid.modes.push_back(make_mode(k, lambda));
  }
  grid.modes.insert(grid.modes.end(), grid.positive_modes.begin(), grid.positive_modes.end());
  return grid;
}

inline KGrid make_kgrid(const ModelParams& params) {
  params.validate();
  return make_kgrid(params.N, params.lambda);
}

}  // namespace ising_dephasing
