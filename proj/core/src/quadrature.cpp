#include "anelor/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "anelor/errors.hpp"

namespace anelor {

QuadratureRule::QuadratureRule(int order) : order_(order), nodes_(order), weights_(order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");

  // Newton iteration on P_n for the roots in (-1, 1), then map to [0, 1].
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? t : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (t * pn - pnm1) / (t * t - 1.0);
      const double step = pn / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    const double pn = n == 1 ? t : p1;
    const double pnm1 = n == 1 ? 1.0 : p0;
    dp = n * (t * pn - pnm1) / (t * t - 1.0);
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);

    nodes_[i] = 0.5 * (1.0 - t);
    nodes_[n - 1 - i] = 0.5 * (1.0 + t);
    weights_[i] = 0.5 * w;
    weights_[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.5;
}

double QuadratureRule::integrate(const std::function<double(double)>& f, double a, double b) const {
  const double h = b - a;
  double sum = 0.0;
  for (int i = 0; i < order_; ++i) sum += weights_[i] * f(a + h * nodes_[i]);
  return h * sum;
}

double QuadratureRule::integrate_cell(const std::function<double(double, double)>& f,
                                      double length) const {
  double sum = 0.0;
  for (int i = 0; i < order_; ++i) {
    const double x = length * nodes_[i];
    double row = 0.0;
    for (int j = 0; j < order_; ++j) {
      const double v = f(x, nodes_[j]);
      if (!std::isfinite(v)) {
        throw NumericalError("non-finite integrand sample at (x, z) = (" + std::to_string(x) +
                             ", " + std::to_string(nodes_[j]) + ")");
      }
      row += weights_[j] * v;
    }
    sum += weights_[i] * row;
  }
  return length * sum;
}

}  // namespace anelor
