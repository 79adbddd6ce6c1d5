#pragma once

#include <numbers>
#include <string>

namespace anelor {

/// Dimensionless inputs of one convection problem in the periodicity cell
/// (0, length) x (0, 1).
struct PhysicalParams {
  double beta = 0.0;                                 // compressibility factor
  double prandtl = 10.0;                             // Pr
  double rayleigh = 0.0;                             // Ra
  double gamma = 4.0 / 3.0;                          // bulk/shear viscosity ratio + 1/3
  double length = 2.0 * std::numbers::sqrt2;         // horizontal period

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;

  PhysicalParams with_beta(double b) const {
    PhysicalParams p = *this;
    p.beta = b;
    return p;
  }
  PhysicalParams with_rayleigh(double ra) const {
    PhysicalParams p = *this;
    p.rayleigh = ra;
    return p;
  }
  PhysicalParams with_length(double l) const {
    PhysicalParams p = *this;
    p.length = l;
    return p;
  }

  std::string describe() const;
};

/// Horizontal wavenumber 2 pi / l of the m = 1 Fourier mode.
inline double wavenumber(double length) { return 2.0 * std::numbers::pi / length; }

/// The classic onset value 27 pi^4 / 4 of the incompressible layer.
inline constexpr double kClassicCriticalRayleigh =
    27.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi / 4.0;

/// (e^b - 1) / b, continuous through b = 0.
double expm1_ratio(double b);

/// (1 - e^{-b}) / b, continuous through b = 0.
double one_minus_exp_neg_ratio(double b);

}  // namespace anelor
