#include "anelor/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "anelor/basis.hpp"
#include "anelor/errors.hpp"

namespace anelor {

namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

constexpr int kMaxDerivative = 3;
constexpr double kConvergenceTolerance = 1e-9;
constexpr int kMinimumOrder = 32;

// One mode tabulated on the tensor grid: separable, so x- and z-derivative
// tables suffice for every mixed derivative.
class SampledMode {
 public:
  SampledMode(const ModeIndex& j, const QuadratureRule& rule, double beta, double length)
      : x_(rule.order()), z_(rule.order()) {
    const auto nodes = rule.nodes();
    for (int i = 0; i < rule.order(); ++i) {
      for (int p = 0; p <= kMaxDerivative; ++p) {
        x_[i][p] = fourier_derivative(j.parity(), j.horizontal(), p, length * nodes[i], length);
        z_[i][p] = vertical_derivative(j.vertical(), p, nodes[i], beta);
      }
    }
  }

  double d(int px, int pz, int i, int j) const { return x_[i][px] * z_[j][pz]; }

 private:
  std::vector<std::array<double, kMaxDerivative + 1>> x_;
  std::vector<std::array<double, kMaxDerivative + 1>> z_;
};

// l * sum_ij w_i w_j f(i, j)
template <typename F>
double grid_integral(const QuadratureRule& rule, double length, F&& f) {
  const auto w = rule.weights();
  double sum = 0.0;
  for (int i = 0; i < rule.order(); ++i) {
    double row = 0.0;
    for (int j = 0; j < rule.order(); ++j) {
      const double v = f(i, j);
      if (!std::isfinite(v)) throw NumericalError("non-finite projection integrand");
      row += w[j] * v;
    }
    sum += w[i] * row;
  }
  return length * sum;
}

struct LorenzModes {
  ModeIndex a{-1, 1, 1};
  ModeIndex b{1, 1, 1};
  ModeIndex c{1, 0, 2};
};

struct SampledLorenzModes {
  SampledLorenzModes(const PhysicalParams& p, const QuadratureRule& rule)
      : a(LorenzModes{}.a, rule, p.beta, p.length),
        b(LorenzModes{}.b, rule, p.beta, p.length),
        c(LorenzModes{}.c, rule, p.beta, p.length),
        weight(rule.order()) {
    for (int j = 0; j < rule.order(); ++j) weight[j] = std::exp(p.beta * rule.nodes()[j]);
  }
  SampledMode a;
  SampledMode b;
  SampledMode c;
  std::vector<double> weight;  // e^{beta z} at the z nodes
};

// e^{bz} (psi_x tau_z - psi_z tau_x) tested against `test`, for psi = a-mode
// and tau = `tau` mode.
double nonlinear_tau_projection(const SampledLorenzModes& s, const SampledMode& tau,
                                const SampledMode& test, const QuadratureRule& rule,
                                double length) {
  return grid_integral(rule, length, [&](int i, int j) {
    const double jac = s.a.d(1, 0, i, j) * tau.d(0, 1, i, j) - s.a.d(0, 1, i, j) * tau.d(1, 0, i, j);
    return s.weight[j] * jac * test.d(0, 0, i, j);
  });
}

double rel_change(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

std::string_view to_string(CoeffSource source) {
  switch (source) {
    case CoeffSource::oracle: return "oracle";
    case CoeffSource::closed_form: return "closed_form";
    case CoeffSource::paper_display: return "paper_display";
  }
  return "unknown";
}

std::optional<CoeffSource> parse_coeff_source(std::string_view text) {
  if (text == "oracle") return CoeffSource::oracle;
  if (text == "closed_form" || text == "closed") return CoeffSource::closed_form;
  if (text == "paper_display" || text == "paper") return CoeffSource::paper_display;
  return std::nullopt;
}

ProjectionTerms oracle_projections(const PhysicalParams& params, const QuadratureRule& rule) {
  params.validate();
  const SampledLorenzModes s(params, rule);
  const double b = params.beta;
  const double l = params.length;
  const double sqrt_ra = std::sqrt(params.rayleigh);
  const double mu = -vorticity_eigenvalue(LorenzModes{}.a, params);
  const auto& a = s.a;
  const auto& w = s.weight;

  ProjectionTerms t;
  // omega = mu e^{bz} psi by the eigen-relation.
  t.mass_omega = grid_integral(rule, l, [&](int i, int j) { return mu * w[j] * a.d(0, 0, i, j) * a.d(0, 0, i, j); });

  // e^{bz} Δ(e^{bz} G) = e^{2bz} (ΔG + 2b G_z + b^2 G), G = mu psi - b psi_z.
  t.diffusive_omega = grid_integral(rule, l, [&](int i, int j) {
    const double g = mu * a.d(0, 0, i, j) - b * a.d(0, 1, i, j);
    const double g_z = mu * a.d(0, 1, i, j) - b * a.d(0, 2, i, j);
    const double g_xx = mu * a.d(2, 0, i, j) - b * a.d(2, 1, i, j);
    const double g_zz = mu * a.d(0, 2, i, j) - b * a.d(0, 3, i, j);
    const double lap = g_xx + g_zz + 2.0 * b * g_z + b * b * g;
    return w[j] * w[j] * lap * a.d(0, 0, i, j);
  });

  t.gamma_term = grid_integral(rule, l, [&](int i, int j) {
    return params.gamma * b * b * w[j] * w[j] * a.d(2, 0, i, j) * a.d(0, 0, i, j);
  });

  t.buoyancy_omega = grid_integral(rule, l, [&](int i, int j) {
    return -sqrt_ra * w[j] * s.b.d(1, 0, i, j) * a.d(0, 0, i, j);
  });

  t.nonlinear_omega = grid_integral(rule, l, [&](int i, int j) {
    const double psi = a.d(0, 0, i, j);
    const double psi_x = a.d(1, 0, i, j);
    const double psi_z = a.d(0, 1, i, j);
    const double omega = mu * w[j] * psi;
    const double omega_x = mu * w[j] * psi_x;
    const double omega_z = mu * w[j] * (b * psi + psi_z);
    return (b * w[j] * omega * psi_x + w[j] * (psi_x * omega_z - psi_z * omega_x)) * psi;
  });

  t.mass_tau1 = grid_integral(rule, l, [&](int i, int j) { return s.b.d(0, 0, i, j) * s.b.d(0, 0, i, j); });
  t.mass_tau2 = grid_integral(rule, l, [&](int i, int j) { return s.c.d(0, 0, i, j) * s.c.d(0, 0, i, j); });

  t.diffusive_tau1 = grid_integral(rule, l, [&](int i, int j) {
    return w[j] * (s.b.d(2, 0, i, j) + s.b.d(0, 2, i, j)) * s.b.d(0, 0, i, j);
  });
  t.diffusive_tau2 = grid_integral(rule, l, [&](int i, int j) {
    return w[j] * (s.c.d(2, 0, i, j) + s.c.d(0, 2, i, j)) * s.c.d(0, 0, i, j);
  });

  t.source_tau = grid_integral(rule, l, [&](int i, int j) {
    return sqrt_ra * w[j] * a.d(1, 0, i, j) * s.b.d(0, 0, i, j);
  });

  t.nonlinear_tau1 = nonlinear_tau_projection(s, s.c, s.b, rule, l);
  t.nonlinear_tau2 = nonlinear_tau_projection(s, s.b, s.c, rule, l);
  return t;
}

AnsatzClosure oracle_closure(const PhysicalParams& params, const QuadratureRule& rule) {
  params.validate();
  const SampledLorenzModes s(params, rule);
  const double l = params.length;
  const double sqrt_ra = std::sqrt(params.rayleigh);
  const auto& w = s.weight;

  AnsatzClosure c;
  c.buoyancy_from_c = grid_integral(rule, l, [&](int i, int j) {
    return -sqrt_ra * w[j] * s.c.d(1, 0, i, j) * s.a.d(0, 0, i, j);
  });
  c.source_onto_c = grid_integral(rule, l, [&](int i, int j) {
    return sqrt_ra * w[j] * s.a.d(1, 0, i, j) * s.c.d(0, 0, i, j);
  });
  c.mass_cross = grid_integral(rule, l, [&](int i, int j) { return s.b.d(0, 0, i, j) * s.c.d(0, 0, i, j); });
  c.diffusive_cross = grid_integral(rule, l, [&](int i, int j) {
    return w[j] * (s.c.d(2, 0, i, j) + s.c.d(0, 2, i, j)) * s.b.d(0, 0, i, j);
  });
  c.nonlinear_ab_onto_tau1 = nonlinear_tau_projection(s, s.b, s.b, rule, l);
  c.nonlinear_ac_onto_tau2 = nonlinear_tau_projection(s, s.c, s.c, rule, l);
  return c;
}

ProjectionTerms closed_form_projections(const PhysicalParams& params) {
  params.validate();
  const double b = params.beta;
  const double b2 = b * b;
  const double l = params.length;
  const double k = wavenumber(l);
  const double k2 = k * k;
  const double pi2 = pi * pi;
  const double pi4 = pi2 * pi2;
  const double mu = b2 / 4.0 + pi2 + k2;
  const double sqrt_ra = std::sqrt(params.rayleigh);
  const double l32 = l * std::sqrt(l);
  const double grow = 4.0 * pi2 * expm1_ratio(b) / (b2 + 4.0 * pi2);  // ∫ 2 sin^2(pi z) e^{bz} dz
  const double decay = one_minus_exp_neg_ratio(b);
  const double half = one_minus_exp_neg_ratio(b / 2.0);

  ProjectionTerms t;
  t.mass_omega = mu;
  t.diffusive_omega = -(mu * mu + b2 * k2) * grow;
  t.gamma_term = -params.gamma * b2 * k2 * grow;
  t.buoyancy_omega = sqrt_ra * k;
  t.nonlinear_omega = 0.0;
  t.mass_tau1 = decay * 4.0 * pi2 / (b2 + 4.0 * pi2);
  t.mass_tau2 = decay * 16.0 * pi2 / (b2 + 16.0 * pi2);
  t.diffusive_tau1 = b2 / 4.0 - pi2 - k2;
  t.diffusive_tau2 = b2 / 4.0 - 4.0 * pi2;
  t.source_tau = sqrt_ra * k;
  t.nonlinear_tau1 = -128.0 * sqrt2 * pi4 * half / (l32 * (b2 + 64.0 * pi2));
  t.nonlinear_tau2 =
      256.0 * sqrt2 * pi4 * (8.0 * pi2 - b2) * half / (l32 * (b2 + 16.0 * pi2) * (b2 + 64.0 * pi2));
  return t;
}

ProjectionTerms paper_display_projections(const PhysicalParams& params) {
  params.validate();
  const double be = params.beta;
  const double b2 = be * be;
  const double l = params.length;
  const double pi2 = pi * pi;
  const double pi4 = pi2 * pi2;
  const double mu = b2 / 4.0 + pi2 + 4.0 * pi2 / (l * l);
  const double sqrt_ra = std::sqrt(params.rayleigh);
  const double one_minus_exp_over = -expm1_ratio(be);          // (1 - e^b) / b
  const double exp_half_minus_one_over = -0.5 * one_minus_exp_neg_ratio(be / 2.0);  // (e^{-b/2} - 1) / b

  ProjectionTerms t;
  t.mass_omega = mu;
  t.diffusive_omega = (b2 * 4.0 * pi2 / (l * l) + mu * mu) * 4.0 * pi2 * one_minus_exp_over / (b2 + 4.0 * pi2);
  // -gamma b 16 pi^4 / l^2 (e^b - 1) / (b^2 + 4 pi^2), with the 1/b folded into expm1_ratio.
  t.gamma_term = -params.gamma * b2 * 16.0 * pi4 / (l * l) * expm1_ratio(be) / (b2 + 4.0 * pi2);
  t.buoyancy_omega = sqrt_ra * 2.0 * pi / l;
  t.nonlinear_omega = 0.0;
  t.mass_tau1 = one_minus_exp_neg_ratio(be) * 4.0 * pi2 / (b2 + 4.0 * pi2);
  t.mass_tau2 = one_minus_exp_neg_ratio(be) * 16.0 * pi2 / (b2 + 16.0 * pi2);
  t.diffusive_tau1 = b2 / 4.0 - pi2 - 4.0 * pi2 / (l * l);
  t.diffusive_tau2 = 2.0 * (b2 / 8.0 - 2.0 * pi2);
  t.source_tau = sqrt_ra * 2.0 * pi / l;
  t.nonlinear_tau1 = exp_half_minus_one_over * 64.0 * pi4 / (b2 + 64.0 * pi2);
  t.nonlinear_tau2 = std::sqrt(2.0 / l) * 4.0 * pi2 / l * exp_half_minus_one_over *
                     (4.0 * b2 / (b2 + 16.0 * pi2) - 3.0 * b2 / (b2 + 64.0 * pi2) - 1.0);
  return t;
}

GalerkinCoeffs coefficients_from_projections(const ProjectionTerms& t, const PhysicalParams& params,
                                             CoeffSource source) {
  const double pr = params.prandtl;
  GalerkinCoeffs c;
  c.e1 = pr * (t.diffusive_omega + t.gamma_term) / t.mass_omega;
  c.e2 = pr * t.buoyancy_omega / t.mass_omega;
  c.e3 = -t.nonlinear_tau1 / t.mass_tau1;
  c.e4 = t.diffusive_tau1 / t.mass_tau1;
  c.e5 = t.source_tau / t.mass_tau1;
  c.e6 = -t.nonlinear_tau2 / t.mass_tau2;
  c.e7 = t.diffusive_tau2 / t.mass_tau2;
  c.provenance = source;
  c.params = params;
  return c;
}

GalerkinCoeffs oracle_coefficients(const PhysicalParams& params, const QuadratureRule& rule) {
  if (rule.order() < kMinimumOrder) {
    throw std::invalid_argument("oracle quadrature needs at least 32 points per axis");
  }
  const GalerkinCoeffs coarse =
      coefficients_from_projections(oracle_projections(params, rule), params, CoeffSource::oracle);
  const GalerkinCoeffs fine = coefficients_from_projections(
      oracle_projections(params, rule.refined()), params, CoeffSource::oracle);
  const auto ca = coarse.as_array();
  const auto fa = fine.as_array();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (rel_change(ca[i], fa[i]) > kConvergenceTolerance) {
      throw NumericalError("quadrature not converged for e" + std::to_string(i + 1) + " at " +
                           params.describe());
    }
  }
  return coarse;
}

GalerkinCoeffs closed_form_coefficients(const PhysicalParams& params) {
  params.validate();
  const double b = params.beta;
  const double b2 = b * b;
  const double l = params.length;
  const double k = wavenumber(l);
  const double k2 = k * k;
  const double pi2 = pi * pi;
  const double mu = b2 / 4.0 + pi2 + k2;
  const double sqrt_ra = std::sqrt(params.rayleigh);
  const double pr = params.prandtl;
  const double l32 = l * std::sqrt(l);
  const double grow = 4.0 * pi2 * expm1_ratio(b) / (b2 + 4.0 * pi2);
  const double decay = one_minus_exp_neg_ratio(b);
  const double half = one_minus_exp_neg_ratio(b / 2.0);
  const double mass1 = decay * 4.0 * pi2 / (b2 + 4.0 * pi2);
  const double mass2 = decay * 16.0 * pi2 / (b2 + 16.0 * pi2);

  GalerkinCoeffs c;
  c.e1 = -pr * grow * (mu * mu + (1.0 + params.gamma) * b2 * k2) / mu;
  c.e2 = pr * sqrt_ra * k / mu;
  c.e3 = 32.0 * sqrt2 * pi2 * (b2 + 4.0 * pi2) * half / (l32 * (b2 + 64.0 * pi2) * decay);
  c.e4 = -(pi2 + k2 - b2 / 4.0) / mass1;
  c.e5 = sqrt_ra * k / mass1;
  c.e6 = -16.0 * sqrt2 * pi2 * (8.0 * pi2 - b2) * half / (l32 * (b2 + 64.0 * pi2) * decay);
  c.e7 = (b2 / 4.0 - 4.0 * pi2) / mass2;
  c.provenance = CoeffSource::closed_form;
  c.params = params;
  return c;
}

GalerkinCoeffs paper_display_coefficients(const PhysicalParams& params) {
  params.validate();
  const double b = params.beta;
  const double b2 = b * b;
  const double l = params.length;
  const double pi2 = pi * pi;
  const double mu = b2 / 4.0 + pi2 + 4.0 * pi2 / (l * l);
  const double sqrt_ra = std::sqrt(params.rayleigh);
  const double pr = params.prandtl;
  const double inv_decay = 1.0 / one_minus_exp_neg_ratio(b);  // b / (1 - e^{-b})
  const double half_sum = 1.0 + std::exp(-b / 2.0);

  GalerkinCoeffs c;
  c.e1 = -(4.0 * pi2 * pr / (mu * (b2 + 4.0 * pi2))) *
         (mu * mu + b2 * 4.0 * pi2 / (l * l) + params.gamma * b2 * 4.0 * pi2 / l) * expm1_ratio(b);
  c.e2 = 2.0 * pi * pr * sqrt_ra / (mu * l);
  c.e3 = std::sqrt(2.0 / l) * (b2 + 4.0 * pi2) / (b2 + 16.0 * pi2) * 64.0 * pi2 / half_sum / l;
  c.e4 = -(b2 + 4.0 * pi2) / (4.0 * pi2) * inv_decay * (pi2 + 4.0 * pi2 / (l * l) - b2 / 4.0);
  c.e5 = sqrt_ra * (b2 + 4.0 * pi2) / (2.0 * pi * l) * inv_decay;
  c.e6 = std::sqrt(2.0 / l) * (b2 + 16.0 * pi2) / (8.0 * l) * 2.0 / half_sum *
         (4.0 * b2 / (b2 + 16.0 * pi2) - 3.0 * b2 / (b2 + 64.0 * pi2) - 1.0);
  c.e7 = (b2 + 16.0 * pi2) / (8.0 * pi2) * inv_decay * (b2 / 8.0 - 2.0 * pi2);
  c.provenance = CoeffSource::paper_display;
  c.params = params;
  return c;
}

GalerkinCoeffs galerkin_coefficients(const PhysicalParams& params, CoeffSource source,
                                     const QuadratureRule& rule) {
  switch (source) {
    case CoeffSource::oracle: return oracle_coefficients(params, rule);
    case CoeffSource::closed_form: return closed_form_coefficients(params);
    case CoeffSource::paper_display: return paper_display_coefficients(params);
  }
  throw std::invalid_argument("unknown coefficient source");
}

double relative_deviation(double value, double reference) {
  const double diff = std::abs(value - reference);
  return reference == 0.0 ? diff : diff / std::abs(reference);
}

double max_relative_deviation(const GalerkinCoeffs& value, const GalerkinCoeffs& reference) {
  const auto v = value.as_array();
  const auto r = reference.as_array();
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, relative_deviation(v[i], r[i]));
  return worst;
}

std::vector<ProjectionTermReport> discrepancy_report(const PhysicalParams& params,
                                                     const QuadratureRule& rule) {
  const ProjectionTerms oracle = oracle_projections(params, rule);
  const ProjectionTerms closed = closed_form_projections(params);
  const ProjectionTerms paper = paper_display_projections(params);

  std::vector<ProjectionTermReport> rows;
  // Terms that vanish analytically are compared in absolute terms.
  auto dev = [](double v, double o, double c) { return c == 0.0 ? std::abs(v - o) : relative_deviation(v, o); };
  auto add = [&](std::string name, double o, double c, double p) {
    rows.push_back({std::move(name), o, c, p, dev(c, o, c), dev(p, o, c)});
  };
  add("diffusive-omega", oracle.diffusive_omega, closed.diffusive_omega, paper.diffusive_omega);
  add("gamma-term", oracle.gamma_term, closed.gamma_term, paper.gamma_term);
  add("buoyancy-omega", oracle.buoyancy_omega, closed.buoyancy_omega, paper.buoyancy_omega);
  add("mass-omega", oracle.mass_omega, closed.mass_omega, paper.mass_omega);
  add("mass-tau1", oracle.mass_tau1, closed.mass_tau1, paper.mass_tau1);
  add("mass-tau2", oracle.mass_tau2, closed.mass_tau2, paper.mass_tau2);
  add("diffusive-tau1", oracle.diffusive_tau1, closed.diffusive_tau1, paper.diffusive_tau1);
  add("diffusive-tau2", oracle.diffusive_tau2, closed.diffusive_tau2, paper.diffusive_tau2);
  add("source-tau", oracle.source_tau, closed.source_tau, paper.source_tau);
  add("nonlinear-tau->111", oracle.nonlinear_tau1, closed.nonlinear_tau1, paper.nonlinear_tau1);
  add("nonlinear-tau->102", oracle.nonlinear_tau2, closed.nonlinear_tau2, paper.nonlinear_tau2);
  add("nonlinear-omega", oracle.nonlinear_omega, closed.nonlinear_omega, paper.nonlinear_omega);

  const auto o = oracle_coefficients(params, rule).as_array();
  const auto c = closed_form_coefficients(params).as_array();
  const auto p = paper_display_coefficients(params).as_array();
  for (std::size_t i = 0; i < o.size(); ++i) add("e" + std::to_string(i + 1), o[i], c[i], p[i]);
  return rows;
}

}  // namespace anelor
