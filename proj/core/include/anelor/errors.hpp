#pragma once

#include <stdexcept>
#include <string>

namespace anelor {

/// Raised when a numerical procedure cannot deliver a trustworthy result:
/// quadrature that does not converge, an integrator step-size underflow,
/// a bracket that cannot be found, an eigen-solver failure.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Coefficients for which the map to the classic Lorenz form does not exist.
class DegenerateCoefficients : public NumericalError {
 public:
  explicit DegenerateCoefficients(const std::string& what) : NumericalError(what) {}
};

}  // namespace anelor
