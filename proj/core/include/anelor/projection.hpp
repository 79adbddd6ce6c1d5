#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anelor/params.hpp"
#include "anelor/quadrature.hpp"

namespace anelor {

/// Where a set of reduced-system coefficients came from.
enum class CoeffSource { oracle, closed_form, paper_display };

std::string_view to_string(CoeffSource source);
std::optional<CoeffSource> parse_coeff_source(std::string_view text);

/// Coefficients of the three-mode system
///   A' = e1 A + e2 B
///   B' = e3 A C + e4 B + e5 A
///   C' = e6 A B + e7 C
/// for psi = A psi^{-1,1,1}, tau = B psi^{+1,1,1} + C psi^{+1,0,2}.
struct GalerkinCoeffs {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
  double e5 = 0.0;
  double e6 = 0.0;
  double e7 = 0.0;
  CoeffSource provenance = CoeffSource::oracle;
  PhysicalParams params;

  std::array<double, 7> as_array() const { return {e1, e2, e3, e4, e5, e6, e7}; }
};

/// Plain L2(Ω) projections of every term of the two field equations, per unit
/// amplitude, each with the sign it has where it stands in the equation:
///
///   (1/Pr)(omega_t + N_omega) - e^{bz} Δ(omega - b e^{bz} psi_z)
///       = -sqrt(Ra) e^{bz} tau_x + gamma b^2 e^{2bz} psi_xx
///   tau_t + e^{bz}(psi_x tau_z - psi_z tau_x) - e^{bz} Δtau = sqrt(Ra) e^{bz} psi_x
///
/// The vorticity-equation terms are projected onto psi^{-1,1,1}; the
/// temperature terms onto psi^{+1,1,1} (suffix 1) and psi^{+1,0,2} (suffix 2).
struct ProjectionTerms {
  double mass_omega = 0.0;       // <omega_t, psi^{-111}> per A'
  double diffusive_omega = 0.0;  // <e^{bz} Δ(omega - b e^{bz} psi_z), psi^{-111}> per A
  double gamma_term = 0.0;       // <gamma b^2 e^{2bz} psi_xx, psi^{-111}> per A
  double buoyancy_omega = 0.0;   // <-sqrt(Ra) e^{bz} tau_x, psi^{-111}> per B
  double mass_tau1 = 0.0;        // <tau_t, psi^{111}> per B'
  double mass_tau2 = 0.0;        // <tau_t, psi^{102}> per C'
  double diffusive_tau1 = 0.0;   // <e^{bz} Δtau, psi^{111}> per B
  double diffusive_tau2 = 0.0;   // <e^{bz} Δtau, psi^{102}> per C
  double source_tau = 0.0;       // <sqrt(Ra) e^{bz} psi_x, psi^{111}> per A
  double nonlinear_tau1 = 0.0;   // <e^{bz}(psi_x tau_z - psi_z tau_x), psi^{111}> per A C
  double nonlinear_tau2 = 0.0;   // <e^{bz}(psi_x tau_z - psi_z tau_x), psi^{102}> per A B
  double nonlinear_omega = 0.0;  // <b e^{bz} omega psi_x + e^{bz}(psi_x omega_z - psi_z omega_x), psi^{-111}> per A^2
};

/// Projections that the three-mode ansatz needs to vanish for the reduced
/// system to close in the stated form. All are zero by x-orthogonality.
struct AnsatzClosure {
  double buoyancy_from_c = 0.0;          // <-sqrt(Ra) e^{bz} (psi^{102})_x, psi^{-111}>
  double source_onto_c = 0.0;            // <sqrt(Ra) e^{bz} psi_x, psi^{102}>
  double mass_cross = 0.0;               // <psi^{111}, psi^{102}>
  double diffusive_cross = 0.0;          // <e^{bz} Δpsi^{102}, psi^{111}>
  double nonlinear_ab_onto_tau1 = 0.0;   // A B term projected onto psi^{111}
  double nonlinear_ac_onto_tau2 = 0.0;   // A C term projected onto psi^{102}
};

ProjectionTerms oracle_projections(const PhysicalParams& params, const QuadratureRule& rule);
AnsatzClosure oracle_closure(const PhysicalParams& params, const QuadratureRule& rule);
ProjectionTerms closed_form_projections(const PhysicalParams& params);

/// Intermediate projections as displayed in the reference formulas
/// (including their simplified form of the A C projection).
ProjectionTerms paper_display_projections(const PhysicalParams& params);

/// Divides each equation by its mass term and reads off e1..e7.
GalerkinCoeffs coefficients_from_projections(const ProjectionTerms& terms,
                                             const PhysicalParams& params, CoeffSource source);

/// Quadrature route. Requires rule.order() >= 32 and throws NumericalError if
/// doubling the order moves any coefficient by more than 1e-9 relative.
GalerkinCoeffs oracle_coefficients(const PhysicalParams& params,
                                   const QuadratureRule& rule = QuadratureRule());

/// Analytic route (series branch near beta = 0).
GalerkinCoeffs closed_form_coefficients(const PhysicalParams& params);

/// Literal transcription of the displayed reference coefficients. Kept for
/// discrepancy reporting only.
GalerkinCoeffs paper_display_coefficients(const PhysicalParams& params);

GalerkinCoeffs galerkin_coefficients(const PhysicalParams& params, CoeffSource source,
                                     const QuadratureRule& rule = QuadratureRule());

/// |value - reference| / |reference|, or the absolute difference when the
/// reference is zero.
double relative_deviation(double value, double reference);

/// Largest relative_deviation over e1..e7.
double max_relative_deviation(const GalerkinCoeffs& value, const GalerkinCoeffs& reference);

struct ProjectionTermReport {
  std::string term;
  double oracle = 0.0;
  double closed_form = 0.0;
  std::optional<double> paper;
  double rel_dev = 0.0;                 // closed form vs oracle
  std::optional<double> paper_rel_dev;  // paper display vs oracle
};

/// One row per projected term followed by one row per coefficient e1..e7.
std::vector<ProjectionTermReport> discrepancy_report(const PhysicalParams& params,
                                                     const QuadratureRule& rule = QuadratureRule());

}  // namespace anelor
