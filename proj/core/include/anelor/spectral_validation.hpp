#pragma once

#include <Eigen/Dense>

#include "anelor/params.hpp"
#include "anelor/quadrature.hpp"

namespace anelor {

/// Linearization of the field equations about the rest state, truncated to
/// psi = sum_n A_n psi^{-1,m,n}, tau = sum_n B_n psi^{+1,m,n}, n = 1..N:
///
///   M y' = (L0 + sqrt(Ra) L1) y,   y = (A_1..A_N, B_1..B_N).
///
/// Vorticity rows are divided by their (diagonal) mass -mu_mn / Pr so the
/// psi block of M is the identity; the tau block is the unweighted Gram
/// matrix of the modes.
struct LinearOperatorPencil {
  int truncation = 0;
  int horizontal = 1;
  PhysicalParams params;
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness0;
  Eigen::MatrixXd stiffness1;

  Eigen::MatrixXd stiffness(double rayleigh) const;
};

/// Throws NumericalError if doubling the quadrature order moves any entry by
/// more than 1e-9 relative to the largest entry of its matrix.
LinearOperatorPencil assemble_pencil(const PhysicalParams& params, int m, int truncation,
                                     const QuadratureRule& rule = QuadratureRule());

/// Generalized eigenvalues of (L(Ra), M).
Eigen::VectorXcd pencil_eigenvalues(const LinearOperatorPencil& pencil, double rayleigh);

/// Largest real part over the 2N generalized eigenvalues.
double leading_growth_rate(const LinearOperatorPencil& pencil, double rayleigh);

struct SpectralSearch {
  double initial_upper = 1e5;
  double max_upper = 1e12;
  double growth_tolerance = 1e-10;
  int max_iterations = 400;
};

/// Bisection on Ra for a zero leading growth rate.
double critical_rayleigh_spectral(const LinearOperatorPencil& pencil,
                                  const SpectralSearch& search = {});

double critical_rayleigh_spectral(const PhysicalParams& params, int m, int truncation,
                                  const QuadratureRule& rule = QuadratureRule(),
                                  const SpectralSearch& search = {});

}  // namespace anelor
