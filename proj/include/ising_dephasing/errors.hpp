#pragma once

#include <stdexcept>
#include <string>

namespace ising_dephasing {

/// Invalid model or sweep parameters (CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Radicand of the dispersion underflows (k = 0 at the critical field).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested quantity is only available at zero temperature.
class UnsupportedParameter : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature non-convergence or a vanishing overlap during branch tracking
/// (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ising_dephasing
