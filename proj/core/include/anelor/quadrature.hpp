#pragma once

#include <functional>
#include <span>
#include <vector>

namespace anelor {

/// Tensor-product Gauss-Legendre rule on the cell (0, l) x (0, 1).
///
/// Nodes and weights are stored once on [0, 1]; the x-axis is mapped by
/// scaling with the period l. With `order` points per axis the rule is exact
/// for polynomials of degree 2*order - 1 in each variable.
class QuadratureRule {
 public:
  static constexpr int kDefaultOrder = 64;

  explicit QuadratureRule(int order = kDefaultOrder);

  int order() const { return order_; }
  int degree() const { return 2 * order_ - 1; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Same rule type with twice as many points per axis.
  QuadratureRule refined() const { return QuadratureRule(2 * order_); }

  /// Integral of f over (a, b).
  double integrate(const std::function<double(double)>& f, double a, double b) const;

  /// Integral of f(x, z) over (0, length) x (0, 1). Throws NumericalError if
  /// any integrand sample is not finite.
  double integrate_cell(const std::function<double(double, double)>& f, double length) const;

 private:
  int order_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace anelor
