#include "anelor/spectral_validation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "anelor/basis.hpp"
#include "anelor/errors.hpp"

namespace anelor {

namespace {

constexpr int kMaxDerivative = 3;
constexpr double kAssemblyTolerance = 1e-9;

struct Tables {
  // [mode][node][order]
  std::vector<std::vector<std::array<double, kMaxDerivative + 1>>> sine_x, cosine_x, z;
  std::vector<double> weight;
};

Tables tabulate(const PhysicalParams& p, int m, int truncation, const QuadratureRule& rule) {
  const int q = rule.order();
  const auto nodes = rule.nodes();
  Tables t;
  t.sine_x.assign(1, std::vector<std::array<double, kMaxDerivative + 1>>(q));
  t.cosine_x.assign(1, std::vector<std::array<double, kMaxDerivative + 1>>(q));
  t.z.assign(truncation, std::vector<std::array<double, kMaxDerivative + 1>>(q));
  t.weight.resize(q);
  for (int i = 0; i < q; ++i) {
    const double x = p.length * nodes[i];
    for (int d = 0; d <= kMaxDerivative; ++d) {
      t.sine_x[0][i][d] = fourier_derivative(-1, m, d, x, p.length);
      t.cosine_x[0][i][d] = fourier_derivative(1, m, d, x, p.length);
    }
  }
  for (int n = 0; n < truncation; ++n) {
    for (int j = 0; j < q; ++j) {
      for (int d = 0; d <= kMaxDerivative; ++d) t.z[n][j][d] = vertical_derivative(n + 1, d, nodes[j], p.beta);
    }
  }
  for (int j = 0; j < q; ++j) t.weight[j] = std::exp(p.beta * nodes[j]);
  return t;
}

LinearOperatorPencil assemble_once(const PhysicalParams& p, int m, int nt, const QuadratureRule& rule) {
  const Tables t = tabulate(p, m, nt, rule);
  const int q = rule.order();
  const auto w = rule.weights();
  const double b = p.beta;
  const double l = p.length;
  const auto& sx = t.sine_x[0];
  const auto& cx = t.cosine_x[0];
  const auto& ew = t.weight;

  // l * sum w_i w_j X(i) Z(j), exploiting separability of every integrand.
  auto integral = [&](auto&& xpart, auto&& zpart) {
    double sx_sum = 0.0;
    double sz_sum = 0.0;
    for (int i = 0; i < q; ++i) sx_sum += w[i] * xpart(i);
    for (int j = 0; j < q; ++j) sz_sum += w[j] * zpart(j);
    const double v = l * sx_sum * sz_sum;
    if (!std::isfinite(v)) throw NumericalError("non-finite pencil entry");
    return v;
  };

  LinearOperatorPencil out;
  out.truncation = nt;
  out.horizontal = m;
  out.params = p;
  out.mass = Eigen::MatrixXd::Zero(2 * nt, 2 * nt);
  out.stiffness0 = Eigen::MatrixXd::Zero(2 * nt, 2 * nt);
  out.stiffness1 = Eigen::MatrixXd::Zero(2 * nt, 2 * nt);

  for (int row = 0; row < nt; ++row) {
    const auto& zr = t.z[row];
    const double mu_row = -vorticity_eigenvalue(ModeIndex(-1, m, row + 1), p);
    const double row_mass_over_pr = mu_row / p.prandtl;
    for (int col = 0; col < nt; ++col) {
      const auto& zc = t.z[col];
      const double mu_col = -vorticity_eigenvalue(ModeIndex(-1, m, col + 1), p);

      // psi rows: (1/Pr) <omega_t, psi_row>, omega = mu e^{bz} psi.
      const double mass_psi = integral([&](int i) { return sx[i][0] * sx[i][0]; },
                                       [&](int j) { return ew[j] * zc[j][0] * zr[j][0]; }) *
                              mu_col / p.prandtl;

      // e^{bz} Δ(e^{bz} G) + gamma b^2 e^{2bz} psi_xx, G = mu psi - b psi_z.
      // Δ(e^{bz} G) = e^{bz}(G_xx + G_zz + 2b G_z + b^2 G); split into x and z parts.
      const double xx_part = integral([&](int i) { return sx[i][2] * sx[i][0]; },
                                      [&](int j) {
                                        const double g = mu_col * zc[j][0] - b * zc[j][1];
                                        return ew[j] * ew[j] * g * zr[j][0];
                                      });
      const double z_part = integral([&](int i) { return sx[i][0] * sx[i][0]; },
                                     [&](int j) {
                                       const double g = mu_col * zc[j][0] - b * zc[j][1];
                                       const double gz = mu_col * zc[j][1] - b * zc[j][2];
                                       const double gzz = mu_col * zc[j][2] - b * zc[j][3];
                                       return ew[j] * ew[j] * (gzz + 2.0 * b * gz + b * b * g) * zr[j][0];
                                     });
      const double gamma_part = p.gamma * b * b *
                                integral([&](int i) { return sx[i][2] * sx[i][0]; },
                                         [&](int j) { return ew[j] * ew[j] * zc[j][0] * zr[j][0]; });
      const double stiff_psi = xx_part + z_part + gamma_part;

      // -e^{bz} tau_x against psi_row (per sqrt Ra).
      const double buoyancy = -integral([&](int i) { return cx[i][1] * sx[i][0]; },
                                        [&](int j) { return ew[j] * zc[j][0] * zr[j][0]; });

      // tau rows.
      const double mass_tau = integral([&](int i) { return cx[i][0] * cx[i][0]; },
                                       [&](int j) { return zc[j][0] * zr[j][0]; });
      const double stiff_tau = integral([&](int i) { return cx[i][2] * cx[i][0]; },
                                        [&](int j) { return ew[j] * zc[j][0] * zr[j][0]; }) +
                               integral([&](int i) { return cx[i][0] * cx[i][0]; },
                                        [&](int j) { return ew[j] * zc[j][2] * zr[j][0]; });
      const double source = integral([&](int i) { return sx[i][1] * cx[i][0]; },
                                     [&](int j) { return ew[j] * zc[j][0] * zr[j][0]; });

      out.mass(row, col) = mass_psi / row_mass_over_pr;
      out.stiffness0(row, col) = stiff_psi / row_mass_over_pr;
      out.stiffness1(row, nt + col) = buoyancy / row_mass_over_pr;
      out.mass(nt + row, nt + col) = mass_tau;
      out.stiffness0(nt + row, nt + col) = stiff_tau;
      out.stiffness1(nt + row, col) = source;
    }
  }
  return out;
}

double max_rel_change(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

Eigen::MatrixXd LinearOperatorPencil::stiffness(double rayleigh) const {
  return stiffness0 + std::sqrt(rayleigh) * stiffness1;
}

LinearOperatorPencil assemble_pencil(const PhysicalParams& params, int m, int truncation,
                                     const QuadratureRule& rule) {
  params.validate();
  if (truncation < 1) throw std::invalid_argument("truncation N must be >= 1");
  if (m < 1) throw std::invalid_argument("horizontal index m must be >= 1");
  LinearOperatorPencil coarse = assemble_once(params, m, truncation, rule);
  const LinearOperatorPencil fine = assemble_once(params, m, truncation, rule.refined());
  if (max_rel_change(coarse.mass, fine.mass) > kAssemblyTolerance ||
      max_rel_change(coarse.stiffness0, fine.stiffness0) > kAssemblyTolerance ||
      max_rel_change(coarse.stiffness1, fine.stiffness1) > kAssemblyTolerance) {
    throw NumericalError("pencil quadrature not converged; raise the quadrature order");
  }
  return coarse;
}

Eigen::VectorXcd pencil_eigenvalues(const LinearOperatorPencil& pencil, double rayleigh) {
  if (!(rayleigh >= 0.0)) throw std::invalid_argument("Ra must be >= 0");
  Eigen::LLT<Eigen::MatrixXd> llt(pencil.mass);
  if (llt.info() != Eigen::Success) throw NumericalError("mass matrix is not positive definite");
  const Eigen::MatrixXd a = llt.solve(pencil.stiffness(rayleigh));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success) throw NumericalError("pencil eigenvalue solve failed");
  return solver.eigenvalues();
}

double leading_growth_rate(const LinearOperatorPencil& pencil, double rayleigh) {
  return pencil_eigenvalues(pencil, rayleigh).real().maxCoeff();
}

double critical_rayleigh_spectral(const LinearOperatorPencil& pencil, const SpectralSearch& search) {
  double lo = 0.0;
  double hi = search.initial_upper;
  if (leading_growth_rate(pencil, lo) >= 0.0) {
    throw NumericalError("rest state is not stable at Ra = 0");
  }
  while (leading_growth_rate(pencil, hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > search.max_upper) throw NumericalError("failed to bracket the critical Rayleigh number");
  }
  for (int it = 0; it < search.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = leading_growth_rate(pencil, mid);
    if (std::abs(g) < search.growth_tolerance && hi - lo < 1e-12 * hi) return mid;
    (g > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double critical_rayleigh_spectral(const PhysicalParams& params, int m, int truncation,
                                  const QuadratureRule& rule, const SpectralSearch& search) {
  return critical_rayleigh_spectral(assemble_pencil(params, m, truncation, rule), search);
}

}  // namespace anelor
