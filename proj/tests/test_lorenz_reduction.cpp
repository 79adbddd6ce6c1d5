#include <cmath>
#include <complex>
#include <random>
#include <vector>
#include <algorithm>

#include <gtest/gtest.h>

#include "anelor/errors.hpp"
#include "anelor/lorenz_reduction.hpp"
#include "oracles.hpp"

namespace anelor {
namespace {

using testing::classic_onset;
using testing::kLClassic;
using testing::kPi;
using testing::rel;

PhysicalParams point(double beta, double ra = 900.0, double length = kLClassic) {
  PhysicalParams p;
  p.beta = beta;
  p.rayleigh = ra;
  p.length = length;
  return p;
}

TEST(ScaleToLorenz, ClassicParametersAtZeroBeta) {
  for (double pr : {0.7, 10.0, 100.0}) {
    PhysicalParams p = point(0.0, 1000.0);
    p.prandtl = pr;
    const LorenzReduction red = scale_to_lorenz(oracle_coefficients(p));
    EXPECT_LT(rel(red.lorenz.sigma, pr), 1e-12);
    EXPECT_NEAR(red.lorenz.delta, 8.0 / 3.0, 1e-10);
    EXPECT_LT(rel(red.lorenz.r, 1000.0 / (27.0 * std::pow(kPi, 4) / 4.0)), 1e-10);
  }
}

TEST(ScaleToLorenz, MapInvariants) {
  for (const auto& p : testing::parameter_grid()) {
    const GalerkinCoeffs c = oracle_coefficients(p);
    const LorenzReduction red = scale_to_lorenz(c);
    const ScalingMap& m = red.scaling;
    EXPECT_LT(rel(m.a / m.b, -c.e1 / c.e2), 1e-12);
    EXPECT_DOUBLE_EQ(m.d, -c.e4);
    EXPECT_LT(rel(m.c, -c.e3 * c.e2 / (c.e4 * c.e1)), 1e-12);
    const double b2 = -c.e3 * c.e6 * c.e2 * c.e2 / (c.e1 * c.e1 * c.e4 * c.e4);
    EXPECT_GT(b2, 0.0);
    EXPECT_GT(m.b, 0.0);
    EXPECT_LT(rel(m.b * m.b, b2), 1e-12);
    EXPECT_LT(rel(red.lorenz.sigma, c.e1 / c.e4), 1e-15);
    EXPECT_LT(rel(red.lorenz.delta, c.e7 / c.e4), 1e-15);
    EXPECT_LT(rel(red.lorenz.r, c.e5 * c.e2 / (c.e4 * c.e1)), 1e-14);
  }
}

TEST(ScaleToLorenz, PushedFieldIsLorenzField) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double beta : {0.0, 0.3, 1.2}) {
    const GalerkinCoeffs c = oracle_coefficients(point(beta, 1500.0));
    const LorenzReduction red = scale_to_lorenz(c);
    const ScalingMap& m = red.scaling;
    for (int i = 0; i < 50; ++i) {
      const Vec3 abc{u(rng), u(rng), u(rng)};
      const Vec3 f = reduced_vector_field(c, abc);
      // dX/ds = a A' / d, etc.
      const Vec3 pushed{m.a * f[0] / m.d, m.b * f[1] / m.d, m.c * f[2] / m.d};
      const Vec3 xyz = m.to_lorenz(abc);
      const Vec3 g = lorenz_vector_field(red.lorenz, xyz);
      const double scale = std::abs(g[0]) + std::abs(g[1]) + std::abs(g[2]);
      for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(pushed[k] - g[k]), 1e-12 * scale);
      const Vec3 back = m.to_reduced(xyz);
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(back[k], abc[k], 1e-15);
    }
  }
}

TEST(ScaleToLorenz, DegenerateCoefficientsRejected) {
  GalerkinCoeffs c = oracle_coefficients(point(0.2));
  GalerkinCoeffs zero_ra = oracle_coefficients(point(0.2, 0.0));
  EXPECT_THROW(scale_to_lorenz(zero_ra), DegenerateCoefficients);
  GalerkinCoeffs bad = c;
  bad.e6 = -bad.e6;  // e3 e6 > 0
  EXPECT_THROW(scale_to_lorenz(bad), DegenerateCoefficients);
  bad = c;
  bad.e1 = 0.0;
  EXPECT_THROW(scale_to_lorenz(bad), DegenerateCoefficients);
  bad = c;
  bad.e4 = 1.0;
  EXPECT_THROW(scale_to_lorenz(bad), DegenerateCoefficients);
}

TEST(CriticalPoints, Examples) {
  EXPECT_EQ(critical_points({10.0, 0.5, 8.0 / 3.0}).size(), 1u);
  EXPECT_EQ(critical_points({10.0, 1.0, 8.0 / 3.0}).size(), 1u);
  const auto pts = critical_points({10.0, 2.0, 8.0 / 3.0});
  ASSERT_EQ(pts.size(), 3u);
  const double s = std::sqrt(8.0 / 3.0);
  EXPECT_EQ(pts[0], (Vec3{0.0, 0.0, 0.0}));
  EXPECT_NEAR(pts[1][0], s, 1e-15);
  EXPECT_NEAR(pts[1][1], s, 1e-15);
  EXPECT_NEAR(pts[1][2], 1.0, 1e-15);
  EXPECT_NEAR(pts[2][0], -s, 1e-15);
  EXPECT_NEAR(pts[2][1], -s, 1e-15);
  for (const auto& p : pts) {
    const Vec3 f = lorenz_vector_field({10.0, 2.0, 8.0 / 3.0}, p);
    for (double v : f) EXPECT_NEAR(v, 0.0, 1e-14);
  }
}

TEST(OriginEigenvalues, Examples) {
  const auto at1 = origin_eigenvalues({10.0, 1.0, 8.0 / 3.0});
  EXPECT_EQ(at1.plus, 0.0);
  EXPECT_NEAR(at1.minus, -11.0, 1e-14);
  EXPECT_DOUBLE_EQ(at1.vertical, -8.0 / 3.0);
  const auto at28 = origin_eigenvalues({10.0, 28.0, 8.0 / 3.0});
  EXPECT_NEAR(at28.plus, (-11.0 + std::sqrt(121.0 + 1080.0)) / 2.0, 1e-12);
  const auto at0 = origin_eigenvalues({10.0, 0.0, 8.0 / 3.0});
  EXPECT_NEAR(std::max(at0.plus, at0.minus), -1.0, 1e-14);
  EXPECT_NEAR(std::min(at0.plus, at0.minus), -10.0, 1e-14);
}

TEST(OriginEigenvalues, MatchNumericalSolve) {
  for (double sigma : {0.5, 1.0, 10.0}) {
    for (double r : {0.0, 0.3, 1.0, 2.0, 28.0}) {
      const LorenzParams lp{sigma, r, 8.0 / 3.0};
      const auto closed = origin_eigenvalues(lp);
      const auto num = jacobian_eigenvalues(lp, {0.0, 0.0, 0.0});
      std::vector<double> a{closed.plus, closed.minus, closed.vertical};
      std::vector<double> b{num[0].real(), num[1].real(), num[2].real()};
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12 * std::max(1.0, std::abs(a[k])));
      for (const auto& z : num) EXPECT_NEAR(z.imag(), 0.0, 1e-12);
    }
  }
}

TEST(OriginEigenvalues, ThresholdSign) {
  for (double r : {0.9, 0.999, 1.001, 1.1}) {
    const double lp = origin_eigenvalues({10.0, r, 8.0 / 3.0}).plus;
    EXPECT_EQ(lp > 0.0, r > 1.0) << r;
    EXPECT_NE(lp, 0.0);
  }
}

TEST(ClassifyRestState, Examples) {
  EXPECT_EQ(classify_rest_state({10.0, 0.99, 8.0 / 3.0}).classification, Stability::asymptotically_stable);
  EXPECT_EQ(classify_rest_state({10.0, 1.01, 8.0 / 3.0}).classification, Stability::unstable);
  EXPECT_EQ(classify_rest_state({10.0, 1.0, 8.0 / 3.0}).classification, Stability::marginal);
  EXPECT_STREQ(to_string(Stability::marginal), "marginal");
}

TEST(ClassifyCriticalPoint, ConvectiveStatesJustAboveOnsetAreStable) {
  const LorenzParams lp{10.0, 2.0, 8.0 / 3.0};
  const auto pts = critical_points(lp);
  const auto rep = classify_critical_point(lp, pts[1]);
  EXPECT_EQ(rep.classification, Stability::asymptotically_stable);
  EXPECT_EQ(classify_critical_point({10.0, 28.0, 8.0 / 3.0}, critical_points({10.0, 28.0, 8.0 / 3.0})[1])
                .classification,
            Stability::unstable);
}

TEST(CriticalRayleigh, ClassicFormulaAtZeroBeta) {
  for (double l : {1.5, 2.0, kLClassic, 4.0, 7.0}) {
    const PhysicalParams p = point(0.0, 0.0, l);
    EXPECT_LT(rel(critical_rayleigh(p), classic_onset(l)), 1e-12) << l;
    EXPECT_LT(rel(critical_rayleigh_incompressible(l), classic_onset(l)), 1e-14);
  }
  EXPECT_LT(rel(critical_rayleigh(point(0.0, 0.0)), 27.0 * std::pow(kPi, 4) / 4.0), 1e-12);
}

TEST(CriticalRayleigh, PluggingBackGivesUnitR) {
  for (double beta : {0.0, 0.1, 0.5, 2.0}) {
    const PhysicalParams p = point(beta, 0.0);
    const double ra = critical_rayleigh(p);
    const double r = scale_to_lorenz(oracle_coefficients(p.with_rayleigh(ra))).lorenz.r;
    EXPECT_LT(std::abs(r - 1.0), 1e-12) << beta;
    EXPECT_LT(rel(ra, critical_rayleigh_closed_form(p)), 1e-10) << beta;
  }
}

TEST(CriticalRayleigh, IndependentCorrectedClosedForm) {
  for (double beta : {0.05, 0.5, 1.5}) {
    for (double l : {2.0, kLClassic, 5.0}) {
      const PhysicalParams p = point(beta, 0.0, l);
      const double k = 2.0 * kPi / l;
      const double b2 = beta * beta;
      const double mu = b2 / 4.0 + kPi * kPi + k * k;
      const double E = std::expm1(beta) / beta;
      const double expected = l * l / (b2 + 4.0 * kPi * kPi) * E * (mu * mu + (1.0 + p.gamma) * b2 * k * k) *
                              (kPi * kPi + k * k - b2 / 4.0);
      EXPECT_LT(rel(critical_rayleigh(p), expected), 1e-10);
    }
  }
}

TEST(CriticalRayleigh, StabilizesWithBeta) {
  EXPECT_GT(critical_rayleigh(point(0.1, 0.0)), 27.0 * std::pow(kPi, 4) / 4.0);
  double prev = critical_rayleigh(point(0.0, 0.0));
  for (int i = 1; i <= 20; ++i) {
    const double ra = critical_rayleigh(point(0.5 * i / 20.0, 0.0));
    EXPECT_GT(ra, prev) << i;
    prev = ra;
  }
}

TEST(CriticalRayleigh, RIsLinearInRayleigh) {
  const PhysicalParams p = point(0.4);
  double ratio0 = 0.0;
  for (double ra : {1e2, 1e3, 1e4}) {
    const double ratio = reduced_rayleigh_ratio(p.with_rayleigh(ra)) / ra;
    if (ratio0 == 0.0) ratio0 = ratio;
    EXPECT_LT(rel(ratio, ratio0), 1e-12);
  }
}

TEST(CriticalRayleigh, SourcesAgreeExceptWhereDisplayedE1Differs) {
  const PhysicalParams p = point(0.3, 0.0);
  EXPECT_LT(rel(critical_rayleigh(p, CoeffSource::closed_form), critical_rayleigh(p)), 1e-10);
  const PhysicalParams z = point(0.0, 0.0);
  EXPECT_LT(rel(critical_rayleigh(z, CoeffSource::paper_display), critical_rayleigh(z)), 1e-12);
}

TEST(TaylorRatio, TendsToOneHalf) {
  const PhysicalParams p = point(0.0, 0.0);
  const double t3 = taylor_ratio(p, 1e-3);
  const double t4 = taylor_ratio(p, 1e-4);
  EXPECT_NEAR(t3, 0.5, 5e-3);
  EXPECT_NEAR(t4, 0.5, 5e-4);
  const double dev1 = std::abs(taylor_ratio(p, 1e-3) - 0.5);
  const double dev2 = std::abs(taylor_ratio(p, 5e-4) - 0.5);
  EXPECT_NEAR(dev2 / dev1, 0.5, 0.02);
  EXPECT_TRUE(std::isfinite(taylor_ratio(p, 0.5)));
  EXPECT_THROW(taylor_ratio(p, 0.0), std::invalid_argument);
}

TEST(MinimizeOverLength, ClassicOptimum) {
  const LengthOptimum opt = minimize_over_length(0.0, 10.0, 4.0 / 3.0);
  EXPECT_LT(rel(opt.length, kLClassic), 1e-6);
  EXPECT_LT(rel(opt.rayleigh, 27.0 * std::pow(kPi, 4) / 4.0), 1e-6);
  EXPECT_GT(opt.evaluations, 0);
}

TEST(MinimizeOverLength, CompressibleOptimumExceedsClassic) {
  const LengthOptimum opt = minimize_over_length(0.1, 10.0, 4.0 / 3.0);
  EXPECT_GT(opt.rayleigh, 27.0 * std::pow(kPi, 4) / 4.0);
}

TEST(MinimizeOverLength, IndependentOfBracket) {
  LengthSearch a;
  LengthSearch b;
  b.lower = 1.0;
  b.upper = 6.0;
  b.grid_points = 41;
  const LengthOptimum x = minimize_over_length(0.0, 10.0, 4.0 / 3.0, a);
  const LengthOptimum y = minimize_over_length(0.0, 10.0, 4.0 / 3.0, b);
  EXPECT_LT(rel(x.length, y.length), 1e-8);
  EXPECT_LT(rel(x.rayleigh, y.rayleigh), 1e-8);
}

TEST(MinimizeOverLength, SignalsMissingBracket) {
  LengthSearch s;
  s.lower = 0.5;
  s.upper = 1.5;
  EXPECT_THROW(minimize_over_length(0.0, 10.0, 4.0 / 3.0, s), NumericalError);
}

TEST(LorenzParams, Validation) {
  EXPECT_THROW((LorenzParams{0.0, 1.0, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((LorenzParams{1.0, -1.0, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((LorenzParams{1.0, 1.0, 0.0}).validate(), std::invalid_argument);
}

}  // namespace
}  // namespace anelor
