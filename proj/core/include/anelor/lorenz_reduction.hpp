#pragma once

#include <array>
#include <complex>
#include <vector>

#include "anelor/params.hpp"
#include "anelor/projection.hpp"
#include "anelor/quadrature.hpp"

namespace anelor {

using Vec3 = std::array<double, 3>;

/// Parameters of X' = sigma (Y - X), Y' = -X Z + r X - Y, Z' = X Y - delta Z.
struct LorenzParams {
  double sigma = 10.0;
  double r = 0.0;
  double delta = 8.0 / 3.0;

  void validate() const;
};

/// X = a A, Y = b B, Z = c C, s = d t.
struct ScalingMap {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double d = 1.0;

  Vec3 to_lorenz(const Vec3& abc) const { return {a * abc[0], b * abc[1], c * abc[2]}; }
  Vec3 to_reduced(const Vec3& xyz) const { return {xyz[0] / a, xyz[1] / b, xyz[2] / c}; }
};

struct LorenzReduction {
  LorenzParams lorenz;
  ScalingMap scaling;
};

/// Throws DegenerateCoefficients when e1, e2 or e4 vanish or e3 e6 >= 0.
LorenzReduction scale_to_lorenz(const GalerkinCoeffs& coeffs);

Vec3 reduced_vector_field(const GalerkinCoeffs& coeffs, const Vec3& abc);
Vec3 lorenz_vector_field(const LorenzParams& lp, const Vec3& xyz);

/// The origin, followed by P+ and P- when r > 1.
std::vector<Vec3> critical_points(const LorenzParams& lp);

/// Eigenvalues of the Jacobian at the origin. `plus` is the root that turns
/// positive for r > 1.
struct OriginEigenvalues {
  double plus = 0.0;
  double minus = 0.0;
  double vertical = 0.0;  // -delta
};

OriginEigenvalues origin_eigenvalues(const LorenzParams& lp);

/// Numerical eigenvalues of the Lorenz Jacobian at an arbitrary point, sorted
/// by decreasing real part.
std::array<std::complex<double>, 3> jacobian_eigenvalues(const LorenzParams& lp, const Vec3& point);

enum class Stability { asymptotically_stable, marginal, unstable };

const char* to_string(Stability s);

struct StabilityReport {
  Vec3 point{};
  std::array<std::complex<double>, 3> eigenvalues{};
  Stability classification = Stability::asymptotically_stable;
};

inline constexpr double kMarginalTolerance = 1e-12;

/// Stable iff r < 1, marginal iff |lambda_plus| <= 1e-12, unstable otherwise.
StabilityReport classify_rest_state(const LorenzParams& lp);

/// Classification of any critical point by the real parts of its Jacobian
/// eigenvalues (used to report on P+-; not a proof of their stability).
StabilityReport classify_critical_point(const LorenzParams& lp, const Vec3& point);

/// r = e5 e2 / (e4 e1) for the given parameters.
double reduced_rayleigh_ratio(const PhysicalParams& params, CoeffSource source = CoeffSource::oracle,
                              const QuadratureRule& rule = QuadratureRule());

/// Ra at which r = 1. r is linear in Ra, so this is Ra_ref / r(Ra_ref); the
/// rayleigh field of `params` is ignored.
double critical_rayleigh(const PhysicalParams& params, CoeffSource source = CoeffSource::oracle,
                         const QuadratureRule& rule = QuadratureRule());

/// Closed form of the onset value with the gamma term carrying 4 pi^2 / l^2:
///   l^2/(b^2 + 4pi^2) (e^b - 1)/b (mu^2 + (1 + gamma) b^2 k^2)(pi^2 + k^2 - b^2/4).
double critical_rayleigh_closed_form(const PhysicalParams& params);

/// mu^3 l^2 / (4 pi^2) with mu = pi^2 + 4 pi^2 / l^2: the incompressible onset.
double critical_rayleigh_incompressible(double length);

/// (Ra*_beta / Ra*_0 - 1) / beta at the geometry of `params`. Tends to 1/2.
double taylor_ratio(const PhysicalParams& params, double beta,
                    CoeffSource source = CoeffSource::oracle,
                    const QuadratureRule& rule = QuadratureRule());

struct LengthSearch {
  double lower = 0.5;
  double upper = 10.0;
  int grid_points = 96;
  double tolerance = 1e-8;
  CoeffSource source = CoeffSource::oracle;
};

struct LengthOptimum {
  double length = 0.0;
  double rayleigh = 0.0;
  int evaluations = 0;
};

/// Minimizes l ↦ Ra*_beta(l): coarse grid scan for a bracket, golden-section
/// search down to `tolerance`, then a central-difference Newton polish.
/// Throws NumericalError if the grid minimum sits on the interval boundary.
LengthOptimum minimize_over_length(double beta, double prandtl, double gamma,
                                   const LengthSearch& search = {},
                                   const QuadratureRule& rule = QuadratureRule());

}  // namespace anelor
