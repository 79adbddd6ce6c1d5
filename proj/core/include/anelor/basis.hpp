#pragma once

#include <functional>
#include <span>
#include <string>

#include "anelor/params.hpp"
#include "anelor/quadrature.hpp"

namespace anelor {

/// Label (i, m, n) of the weighted eigenfunction
///   psi^{imn}(x, z) = phi^{im}(x) * sqrt(2) sin(n pi z) * exp(-beta z / 2),
/// where phi^{+1,m} is a cosine and phi^{-1,m} a sine of period l / m.
class ModeIndex {
 public:
  /// Throws std::invalid_argument unless parity is +1 or -1, m >= 0, n >= 1
  /// and (m = 0 implies parity +1).
  ModeIndex(int parity, int m, int n);

  int parity() const { return parity_; }
  int horizontal() const { return m_; }
  int vertical() const { return n_; }

  /// Same (m, n) with the opposite parity; the x-derivative maps onto it.
  ModeIndex flipped() const { return ModeIndex(-parity_, m_, n_); }

  std::string label() const;

  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;

 private:
  int parity_;
  int m_;
  int n_;
};

/// sin(pi t) and cos(pi t), exact at integer and half-integer t.
double sin_pi(double t);
double cos_pi(double t);

/// Normalized Fourier function phi^{im}(x) on (0, l).
double fourier_eval(int parity, int m, double x, double length);

/// d^order/dx^order of phi^{im}(x).
double fourier_derivative(int parity, int m, int order, double x, double length);

/// d^order/dz^order of sqrt(2) sin(n pi z) exp(-beta z / 2).
double vertical_derivative(int n, int order, double z, double beta);

/// Pointwise value of psi^j.
double mode_eval(const ModeIndex& j, double x, double z, const PhysicalParams& params);

/// d^{px+pz} psi^j / dx^px dz^pz, exact for every order.
double mode_derivative(const ModeIndex& j, int px, int pz, double x, double z, double beta,
                       double length);

/// Value and low-order derivatives of one mode at one point.
struct ModeJet {
  double value = 0.0;
  double dx = 0.0;
  double dz = 0.0;
  double dxx = 0.0;
  double dzz = 0.0;
};

ModeJet mode_jet(const ModeIndex& j, double x, double z, const PhysicalParams& params);

/// Eigenvalue of psi ↦ Δpsi + beta psi_z on psi^j:
///   -(beta^2 / 4 + 4 m^2 pi^2 / l^2 + n^2 pi^2).
double vorticity_eigenvalue(const ModeIndex& j, const PhysicalParams& params);

using Field = std::function<double(double, double)>;

/// Quadrature approximation of ∫_Ω f e^{beta z} g dΩ.
double weighted_inner_product(const Field& f, const Field& g, double beta, double length,
                              const QuadratureRule& rule);

struct CellPoint {
  double x = 0.0;
  double z = 0.0;
};

/// max over the samples of |Δpsi^j + beta psi^j_z - mu psi^j|, with analytic
/// derivatives.
double vorticity_residual(const ModeIndex& j, const PhysicalParams& params,
                          std::span<const CellPoint> samples);

}  // namespace anelor
