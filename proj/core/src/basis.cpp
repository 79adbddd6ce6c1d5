#include "anelor/basis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "anelor/errors.hpp"

namespace anelor {

namespace {

using std::numbers::pi;

// Reduce t to (-1, 1] modulo 2.
double reduce_mod2(double t) {
  double r = std::fmod(t, 2.0);
  if (r > 1.0) r -= 2.0;
  if (r <= -1.0) r += 2.0;
  return r;
}

}  // namespace

ModeIndex::ModeIndex(int parity, int m, int n) : parity_(parity), m_(m), n_(n) {
  if (parity != 1 && parity != -1) throw std::invalid_argument("mode parity must be +1 or -1");
  if (m < 0) throw std::invalid_argument("horizontal index m must be >= 0");
  if (n < 1) throw std::invalid_argument("vertical index n must be >= 1");
  if (m == 0 && parity == -1) {
    throw std::invalid_argument("mode (-1, 0, n) vanishes identically; use parity +1 for m = 0");
  }
}

std::string ModeIndex::label() const {
  return std::string(parity_ > 0 ? "+1" : "-1") + "," + std::to_string(m_) + "," +
         std::to_string(n_);
}

double sin_pi(double t) {
  const double r = reduce_mod2(t);
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(pi * r);
}

double cos_pi(double t) {
  const double r = reduce_mod2(t);
  if (r == 0.0) return 1.0;
  if (r == 1.0) return -1.0;
  if (r == 0.5 || r == -0.5) return 0.0;
  return std::cos(pi * r);
}

double fourier_eval(int parity, int m, double x, double length) {
  return fourier_derivative(parity, m, 0, x, length);
}

double fourier_derivative(int parity, int m, int order, double x, double length) {
  if (parity != 1 && parity != -1) throw std::invalid_argument("mode parity must be +1 or -1");
  if (m < 0) throw std::invalid_argument("horizontal index m must be >= 0");
  if (m == 0 && parity == -1) throw std::invalid_argument("sine branch with m = 0 is not a mode");
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (m == 0) return order == 0 ? std::sqrt(1.0 / length) : 0.0;

  const double k = 2.0 * pi * m / length;
  const double t = 2.0 * m * x / length;
  const double c = cos_pi(t);
  const double s = sin_pi(t);
  // d/dx cos = -k sin, d/dx sin = k cos: a quarter turn per derivative.
  const int phase = (parity == 1 ? 0 : 3) + order;
  double trig = 0.0;
  switch (phase % 4) {
    case 0: trig = c; break;
    case 1: trig = -s; break;
    case 2: trig = -c; break;
    case 3: trig = s; break;
  }
  return std::sqrt(2.0 / length) * std::pow(k, order) * trig;
}

double vertical_derivative(int n, int order, double z, double beta) {
  if (n < 1) throw std::invalid_argument("vertical index n must be >= 1");
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  // sqrt(2) sin(n pi z) e^{-beta z/2} = sqrt(2) Im(e^{s z}), s = -beta/2 + i n pi.
  const std::complex<double> s(-beta / 2.0, n * pi);
  std::complex<double> sq(1.0, 0.0);
  for (int i = 0; i < order; ++i) sq *= s;
  const std::complex<double> e = std::exp(-beta * z / 2.0) * std::complex<double>(cos_pi(n * z), sin_pi(n * z));
  if (order == 0) return std::numbers::sqrt2 * e.imag();
  return std::numbers::sqrt2 * (sq * e).imag();
}

double mode_eval(const ModeIndex& j, double x, double z, const PhysicalParams& params) {
  return mode_derivative(j, 0, 0, x, z, params.beta, params.length);
}

double mode_derivative(const ModeIndex& j, int px, int pz, double x, double z, double beta,
                       double length) {
  return fourier_derivative(j.parity(), j.horizontal(), px, x, length) *
         vertical_derivative(j.vertical(), pz, z, beta);
}

ModeJet mode_jet(const ModeIndex& j, double x, double z, const PhysicalParams& params) {
  const double f0 = fourier_derivative(j.parity(), j.horizontal(), 0, x, params.length);
  const double f1 = fourier_derivative(j.parity(), j.horizontal(), 1, x, params.length);
  const double f2 = fourier_derivative(j.parity(), j.horizontal(), 2, x, params.length);
  const double g0 = vertical_derivative(j.vertical(), 0, z, params.beta);
  const double g1 = vertical_derivative(j.vertical(), 1, z, params.beta);
  const double g2 = vertical_derivative(j.vertical(), 2, z, params.beta);
  return {f0 * g0, f1 * g0, f0 * g1, f2 * g0, f0 * g2};
}

double vorticity_eigenvalue(const ModeIndex& j, const PhysicalParams& params) {
  const double m = j.horizontal();
  const double n = j.vertical();
  const double l = params.length;
  const double b = params.beta;
  return -(b * b / 4.0 + 4.0 * m * m * pi * pi / (l * l) + n * n * pi * pi);
}

double weighted_inner_product(const Field& f, const Field& g, double beta, double length,
                              const QuadratureRule& rule) {
  return rule.integrate_cell(
      [&](double x, double z) { return f(x, z) * std::exp(beta * z) * g(x, z); }, length);
}

double vorticity_residual(const ModeIndex& j, const PhysicalParams& params,
                          std::span<const CellPoint> samples) {
  const double mu = vorticity_eigenvalue(j, params);
  double worst = 0.0;
  for (const auto& p : samples) {
    const ModeJet jet = mode_jet(j, p.x, p.z, params);
    const double r = jet.dxx + jet.dzz + params.beta * jet.dz - mu * jet.value;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace anelor
