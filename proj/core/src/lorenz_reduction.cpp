#include "anelor/lorenz_reduction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "anelor/errors.hpp"

namespace anelor {

namespace {

using std::numbers::pi;

constexpr double kReferenceRayleigh = 1000.0;
constexpr double kGolden = 0.6180339887498949;  // (sqrt 5 - 1) / 2
constexpr double kPolishStep = 1e-4;

}  // namespace

void LorenzParams::validate() const {
  if (!(std::isfinite(sigma) && sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (!(std::isfinite(r) && r >= 0.0)) throw std::invalid_argument("r must be >= 0");
  if (!(std::isfinite(delta) && delta > 0.0)) throw std::invalid_argument("delta must be > 0");
}

LorenzReduction scale_to_lorenz(const GalerkinCoeffs& k) {
  if (k.e1 == 0.0 || k.e2 == 0.0 || k.e4 == 0.0) {
    throw DegenerateCoefficients("scaling needs e1, e2, e4 != 0 (is Ra > 0?)");
  }
  if (!(k.e3 * k.e6 < 0.0)) throw DegenerateCoefficients("scaling needs e3 e6 < 0");
  if (!(k.e4 < 0.0)) throw DegenerateCoefficients("time scaling d = -e4 must be positive");

  const double b2 = -k.e3 * k.e6 * k.e2 * k.e2 / (k.e1 * k.e1 * k.e4 * k.e4);
  if (!(b2 > 0.0)) throw DegenerateCoefficients("b^2 <= 0");

  LorenzReduction out;
  out.scaling.d = -k.e4;
  out.scaling.b = std::sqrt(b2);
  out.scaling.a = -k.e1 / k.e2 * out.scaling.b;
  out.scaling.c = -k.e3 * k.e2 / (k.e4 * k.e1);
  out.lorenz.sigma = k.e1 / k.e4;
  out.lorenz.r = k.e5 * k.e2 / (k.e4 * k.e1);
  out.lorenz.delta = k.e7 / k.e4;
  return out;
}

Vec3 reduced_vector_field(const GalerkinCoeffs& k, const Vec3& y) {
  const auto [a, b, c] = y;
  return {k.e1 * a + k.e2 * b, k.e3 * a * c + k.e4 * b + k.e5 * a, k.e6 * a * b + k.e7 * c};
}

Vec3 lorenz_vector_field(const LorenzParams& lp, const Vec3& y) {
  const auto [x, v, z] = y;
  return {lp.sigma * (v - x), -x * z + lp.r * x - v, x * v - lp.delta * z};
}

std::vector<Vec3> critical_points(const LorenzParams& lp) {
  lp.validate();
  std::vector<Vec3> points{{0.0, 0.0, 0.0}};
  if (lp.r > 1.0) {
    const double q = std::sqrt(lp.delta * (lp.r - 1.0));
    points.push_back({q, q, lp.r - 1.0});
    points.push_back({-q, -q, lp.r - 1.0});
  }
  return points;
}

OriginEigenvalues origin_eigenvalues(const LorenzParams& lp) {
  lp.validate();
  const double s = lp.sigma;
  // (s + 1)^2 + 4 s (r - 1) rewritten so it is visibly non-negative.
  const double root = std::sqrt((s - 1.0) * (s - 1.0) + 4.0 * s * lp.r);
  const double big = (s + 1.0) + root;
  // Product of the roots is -s (r - 1); dividing avoids cancellation near r = 1.
  return {2.0 * s * (lp.r - 1.0) / big, -big / 2.0, -lp.delta};
}

std::array<std::complex<double>, 3> jacobian_eigenvalues(const LorenzParams& lp, const Vec3& p) {
  Eigen::Matrix3d j;
  j << -lp.sigma, lp.sigma, 0.0,
       lp.r - p[2], -1.0, -p[0],
       p[1], p[0], -lp.delta;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(j, false);
  if (solver.info() != Eigen::Success) throw NumericalError("3x3 eigenvalue solve failed");
  std::array<std::complex<double>, 3> ev;
  for (int i = 0; i < 3; ++i) ev[i] = solver.eigenvalues()[i];
  std::sort(ev.begin(), ev.end(), [](auto x, auto y) { return x.real() > y.real(); });
  return ev;
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::asymptotically_stable: return "asymptotically_stable";
    case Stability::marginal: return "marginal";
    case Stability::unstable: return "unstable";
  }
  return "unknown";
}

StabilityReport classify_rest_state(const LorenzParams& lp) {
  const OriginEigenvalues ev = origin_eigenvalues(lp);
  StabilityReport rep;
  rep.eigenvalues = {std::complex<double>(ev.plus), std::complex<double>(ev.minus),
                     std::complex<double>(ev.vertical)};
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](auto x, auto y) { return x.real() > y.real(); });
  if (std::abs(ev.plus) <= kMarginalTolerance) {
    rep.classification = Stability::marginal;
  } else {
    rep.classification = ev.plus < 0.0 ? Stability::asymptotically_stable : Stability::unstable;
  }
  return rep;
}

StabilityReport classify_critical_point(const LorenzParams& lp, const Vec3& point) {
  StabilityReport rep;
  rep.point = point;
  rep.eigenvalues = jacobian_eigenvalues(lp, point);
  const double lead = rep.eigenvalues[0].real();
  if (std::abs(lead) <= kMarginalTolerance) {
    rep.classification = Stability::marginal;
  } else {
    rep.classification = lead < 0.0 ? Stability::asymptotically_stable : Stability::unstable;
  }
  return rep;
}

double reduced_rayleigh_ratio(const PhysicalParams& params, CoeffSource source,
                              const QuadratureRule& rule) {
  const GalerkinCoeffs k = galerkin_coefficients(params, source, rule);
  return k.e5 * k.e2 / (k.e4 * k.e1);
}

double critical_rayleigh(const PhysicalParams& params, CoeffSource source,
                         const QuadratureRule& rule) {
  const double r = reduced_rayleigh_ratio(params.with_rayleigh(kReferenceRayleigh), source, rule);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw NumericalError("reduced Rayleigh ratio is not positive at " + params.describe());
  }
  return kReferenceRayleigh / r;
}

double critical_rayleigh_closed_form(const PhysicalParams& params) {
  params.validate();
  const double b = params.beta;
  const double b2 = b * b;
  const double l = params.length;
  const double k2 = wavenumber(l) * wavenumber(l);
  const double pi2 = pi * pi;
  const double mu = b2 / 4.0 + pi2 + k2;
  return l * l / (b2 + 4.0 * pi2) * expm1_ratio(b) * (mu * mu + (1.0 + params.gamma) * b2 * k2) *
         (pi2 + k2 - b2 / 4.0);
}

double critical_rayleigh_incompressible(double length) {
  const double mu = pi * pi + 4.0 * pi * pi / (length * length);
  return mu * mu * mu * length * length / (4.0 * pi * pi);
}

double taylor_ratio(const PhysicalParams& params, double beta, CoeffSource source,
                    const QuadratureRule& rule) {
  if (!(beta > 0.0)) throw std::invalid_argument("taylor_ratio needs beta > 0");
  const double ra0 = critical_rayleigh(params.with_beta(0.0), source, rule);
  const double rab = critical_rayleigh(params.with_beta(beta), source, rule);
  return (rab / ra0 - 1.0) / beta;
}

LengthOptimum minimize_over_length(double beta, double prandtl, double gamma,
                                   const LengthSearch& search, const QuadratureRule& rule) {
  if (!(search.lower > 0.0 && search.upper > search.lower)) {
    throw std::invalid_argument("length search interval must satisfy 0 < lower < upper");
  }
  if (search.grid_points < 3) throw std::invalid_argument("length grid needs >= 3 points");

  PhysicalParams base;
  base.beta = beta;
  base.prandtl = prandtl;
  base.gamma = gamma;
  base.validate();

  LengthOptimum out;
  auto f = [&](double l) {
    ++out.evaluations;
    return critical_rayleigh(base.with_length(l), search.source, rule);
  };

  const int n = search.grid_points;
  const double h = (search.upper - search.lower) / (n - 1);
  int best = 0;
  double best_value = f(search.lower);
  for (int i = 1; i < n; ++i) {
    const double v = f(search.lower + i * h);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == 0 || best == n - 1) {
    throw NumericalError("failed to bracket a minimum of Ra*(l) inside [" +
                         std::to_string(search.lower) + ", " + std::to_string(search.upper) + "]");
  }

  double lo = search.lower + (best - 1) * h;
  double hi = search.lower + (best + 1) * h;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > search.tolerance) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    }
  }
  double l_star = 0.5 * (lo + hi);

  // Near the minimum Ra* is flat to ~1e-16 relative over |dl| ~ 1e-8, so
  // the golden-section result depends on the starting bracket at that level.
  // Two Newton steps on central differences pin it down.
  for (int pass = 0; pass < 2; ++pass) {
    const double fm = f(l_star - kPolishStep);
    const double f0 = f(l_star);
    const double fp = f(l_star + kPolishStep);
    const double curvature = fp - 2.0 * f0 + fm;
    if (!(curvature > 0.0)) break;
    const double step = 0.5 * kPolishStep * (fp - fm) / curvature;
    if (std::abs(step) > kPolishStep) break;
    l_star -= step;
  }

  out.length = l_star;
  out.rayleigh = f(l_star);
  return out;
}

}  // namespace anelor
