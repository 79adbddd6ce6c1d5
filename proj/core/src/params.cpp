#include "anelor/params.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace anelor {

namespace {

constexpr double kSeriesThreshold = 1e-6;

void require(bool ok, const char* field, const char* rule, double value) {
  if (!ok) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "invalid %s = %.17g: %s", field, value, rule);
    throw std::invalid_argument(buf);
  }
}

}  // namespace

void PhysicalParams::validate() const {
  require(std::isfinite(beta) && beta >= 0.0, "beta", "must be finite and >= 0", beta);
  require(std::isfinite(prandtl) && prandtl > 0.0, "prandtl", "must be finite and > 0", prandtl);
  require(std::isfinite(rayleigh) && rayleigh >= 0.0, "rayleigh", "must be finite and >= 0", rayleigh);
  require(std::isfinite(gamma) && gamma >= 1.0 / 3.0, "gamma", "must be finite and >= 1/3", gamma);
  require(std::isfinite(length) && length > 0.0, "length", "must be finite and > 0", length);
}

std::string PhysicalParams::describe() const {
  char buf[200];
  std::snprintf(buf, sizeof(buf), "beta=%.17g Pr=%.17g Ra=%.17g gamma=%.17g l=%.17g", beta, prandtl,
                rayleigh, gamma, length);
  return buf;
}

double expm1_ratio(double b) {
  if (std::abs(b) < kSeriesThreshold) return 1.0 + b / 2.0 + b * b / 6.0;
  return std::expm1(b) / b;
}

double one_minus_exp_neg_ratio(double b) {
  if (std::abs(b) < kSeriesThreshold) return 1.0 - b / 2.0 + b * b / 6.0;
  return -std::expm1(-b) / b;
}

}  // namespace anelor
