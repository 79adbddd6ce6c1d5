#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "anelor/dynamics.hpp"
#include "anelor/errors.hpp"
#include "anelor/ode.hpp"
#include "oracles.hpp"

namespace anelor {
namespace {

using testing::kLClassic;

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

GalerkinCoeffs coeffs_at_ratio(double beta, double r) {
  PhysicalParams p;
  p.beta = beta;
  p.rayleigh = r * critical_rayleigh(p);
  return oracle_coefficients(p);
}

TEST(DormandPrince45, ExponentialDecayWithDenseOutput) {
  using S = std::array<double, 1>;
  DormandPrince45<1> solver(IntegratorOptions{1e-10, 1e-12});
  std::vector<double> times;
  for (int i = 0; i <= 37; ++i) times.push_back(3.0 * i / 37.0);
  std::vector<S> out;
  solver.integrate([](double, const S& y) { return S{-y[0]}; }, S{1.0}, 0.0, 3.0, times, out);
  ASSERT_EQ(out.size(), times.size());
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(out[i][0], std::exp(-times[i]), 1e-9);
  EXPECT_GT(solver.stats().accepted, 0);
}

TEST(DormandPrince45, HarmonicOscillatorAtOffStepTimes) {
  using S = std::array<double, 2>;
  DormandPrince45<2> solver(IntegratorOptions{1e-11, 1e-13});
  std::vector<double> times;
  for (int i = 0; i <= 200; ++i) times.push_back(0.1 * i + 0.0137 * (i > 0));
  times.back() = 20.0;
  std::vector<S> out;
  solver.integrate([](double, const S& y) { return S{y[1], -y[0]}; }, S{1.0, 0.0}, 0.0, 20.0, times, out);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(out[i][0], std::cos(times[i]), 1e-8);
    EXPECT_NEAR(out[i][1], -std::sin(times[i]), 1e-8);
  }
}

TEST(DormandPrince45, RejectsBadTolerances) {
  EXPECT_THROW(DormandPrince45<1>(IntegratorOptions{0.0, 1e-12}), std::invalid_argument);
  EXPECT_THROW(DormandPrince45<1>(IntegratorOptions{1e-9, 1.5}), std::invalid_argument);
}

TEST(DormandPrince45, SignalsBlowUp) {
  using S = std::array<double, 1>;
  DormandPrince45<1> solver(IntegratorOptions{1e-8, 1e-10});
  S y{1.0};
  // y' = y^2 blows up at t = 1.
  EXPECT_THROW(solver.advance([](double, const S& v) { return S{v[0] * v[0]}; }, y, 0.0, 2.0), NumericalError);
}

TEST(IntegrateReduced, ZeroIsFixed) {
  const Trajectory t = integrate_reduced(coeffs_at_ratio(0.3, 2.0), {0.0, 0.0, 0.0}, 10.0, 1e-10, 1e-12, 51);
  ASSERT_EQ(t.size(), 51u);
  EXPECT_EQ(t.times.front(), 0.0);
  for (const auto& s : t.states) EXPECT_EQ(norm(s), 0.0);
}

TEST(IntegrateReduced, FirstSampleIsInitialAndTimesIncrease) {
  const Trajectory t = integrate_reduced(coeffs_at_ratio(0.3, 0.5), {0.1, 0.2, 0.3}, 1.0, 1e-10, 1e-12, 11);
  EXPECT_EQ(t.states.front(), (Vec3{0.1, 0.2, 0.3}));
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GT(t.times[i], t.times[i - 1]);
  EXPECT_DOUBLE_EQ(t.times.back(), 1.0);
  EXPECT_EQ(t.coordinates, Coordinates::reduced);
  EXPECT_DOUBLE_EQ(t.stats.rtol, 1e-10);
}

TEST(IntegrateReduced, SubcriticalDecayIsMonotoneAfterTransient) {
  // Horizon chosen so the norm stays far above atol, where decay is resolved.
  const Trajectory t = integrate_reduced(coeffs_at_ratio(0.2, 0.5), {1e-3, 1e-3, 1e-3}, 2.0, 1e-12, 1e-18, 401);
  EXPECT_LT(norm(t.states.back()), 1e-3 * norm(t.states.front()));
  EXPECT_GT(norm(t.states.back()), 1e-12);
  for (std::size_t i = 40; i < t.size(); ++i) EXPECT_LT(norm(t.states[i]), norm(t.states[i - 1])) << i;
  EXPECT_EQ(classify_trend(t), Trend::decaying);
}

TEST(IntegrateReduced, SupercriticalLeavesSmallBall) {
  const Trajectory t = integrate_reduced(coeffs_at_ratio(0.2, 2.0), {1e-3, 1e-3, 1e-3}, 10.0, 1e-10, 1e-14, 501);
  double peak = 0.0;
  for (const auto& s : t.states) peak = std::max(peak, norm(s));
  EXPECT_GT(peak, 1e-2);
}

TEST(IntegrateReduced, ToleranceHalvingChangesEndpointLittle) {
  const GalerkinCoeffs c = coeffs_at_ratio(0.4, 3.0);
  for (double rtol : {1e-6, 1e-8}) {
    const Trajectory a = integrate_reduced(c, {0.5, 0.2, 0.1}, 2.0, rtol, rtol, 3);
    const Trajectory b = integrate_reduced(c, {0.5, 0.2, 0.1}, 2.0, rtol / 2.0, rtol / 2.0, 3);
    const double scale = std::max(1.0, norm(a.states.back()));
    for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(a.states.back()[k] - b.states.back()[k]), 10.0 * rtol * scale);
  }
}

TEST(IntegrateReduced, SignSymmetry) {
  const GalerkinCoeffs c = coeffs_at_ratio(0.6, 4.0);
  const Trajectory a = integrate_reduced(c, {0.3, -0.2, 0.5}, 5.0, 1e-11, 1e-13, 101);
  const Trajectory b = integrate_reduced(c, {-0.3, 0.2, 0.5}, 5.0, 1e-11, 1e-13, 101);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.states[i][0], -b.states[i][0], 1e-9);
    EXPECT_NEAR(a.states[i][1], -b.states[i][1], 1e-9);
    EXPECT_NEAR(a.states[i][2], b.states[i][2], 1e-9);
  }
}

TEST(IntegrateReduced, InvalidArguments) {
  const GalerkinCoeffs c = coeffs_at_ratio(0.1, 0.5);
  EXPECT_THROW(integrate_reduced(c, {}, 0.0, 1e-8, 1e-8), std::invalid_argument);
  EXPECT_THROW(integrate_reduced(c, {}, 1.0, 0.0, 1e-8), std::invalid_argument);
  EXPECT_THROW(integrate_reduced(c, {}, 1.0, 1e-8, 1.0), std::invalid_argument);
  EXPECT_THROW(integrate_reduced(c, {std::nan(""), 0.0, 0.0}, 1.0, 1e-8, 1e-8), std::invalid_argument);
  const std::vector<double> bad{0.0, 0.5, 0.5};
  EXPECT_THROW(integrate_reduced(c, {}, bad, 1e-8, 1e-8), std::invalid_argument);
  const std::vector<double> late{0.1, 0.5};
  EXPECT_THROW(integrate_reduced(c, {}, late, 1e-8, 1e-8), std::invalid_argument);
}

TEST(IntegrateLorenz, Examples) {
  const LorenzParams stable{10.0, 0.5, 8.0 / 3.0};
  const Trajectory z = integrate_lorenz(stable, {0.0, 0.0, 0.0}, 5.0, 1e-10, 1e-12, 11);
  for (const auto& s : z.states) EXPECT_EQ(norm(s), 0.0);
  const Trajectory d = integrate_lorenz(stable, {0.01, -0.02, 0.01}, 40.0, 1e-10, 1e-14, 401);
  EXPECT_LT(norm(d.states.back()), 1e-6);
  EXPECT_EQ(d.coordinates, Coordinates::lorenz);

  const LorenzParams two{10.0, 2.0, 8.0 / 3.0};
  const Trajectory c = integrate_lorenz(two, {0.1, 0.1, 0.1}, 200.0, 1e-10, 1e-12, 3);
  const Vec3 end = c.states.back();
  const double s = std::sqrt(8.0 / 3.0);
  EXPECT_NEAR(std::abs(end[0]), s, 1e-6);
  EXPECT_NEAR(std::abs(end[1]), s, 1e-6);
  EXPECT_NEAR(end[2], 1.0, 1e-6);
  EXPECT_GT(end[0] * end[1], 0.0);
}

TEST(MapTrajectory, ZeroAndTimeScaling) {
  const GalerkinCoeffs c = coeffs_at_ratio(0.3, 1.5);
  const LorenzReduction red = scale_to_lorenz(c);
  EXPECT_GT(red.scaling.d, 0.0);
  const Trajectory t = integrate_reduced(c, {0.0, 0.0, 0.0}, 1.0, 1e-9, 1e-12, 5);
  const Trajectory m = map_trajectory(t, red.scaling);
  EXPECT_EQ(m.coordinates, Coordinates::lorenz);
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_DOUBLE_EQ(m.times[i], t.times[i] * red.scaling.d);
    EXPECT_EQ(norm(m.states[i]), 0.0);
  }
}

TEST(MapTrajectory, TwoRouteEquivalence) {
  for (double beta : {0.0, 0.45, 0.9}) {
    for (double r : {0.7, 1.8, 4.2}) {
      const GalerkinCoeffs c = coeffs_at_ratio(beta, r);
      const LorenzReduction red = scale_to_lorenz(c);
      const double d = red.scaling.d;
      const std::vector<double> s = uniform_times(20.0, 201);
      std::vector<double> t(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) t[i] = s[i] / d;
      const ReducedState init{0.2, -0.1, 0.05};
      const Trajectory mapped = map_trajectory(integrate_reduced(c, init, t, 1e-10, 1e-10), red.scaling);
      const Trajectory direct = integrate_lorenz(red.lorenz, red.scaling.to_lorenz(init.vec()), s, 1e-10, 1e-10);
      EXPECT_LT(max_state_deviation(mapped, direct), 1e-6) << beta << " " << r;
    }
  }
}

TEST(Lyapunov, StableOriginIsNegative) {
  EXPECT_LT(largest_lyapunov({10.0, 0.5, 8.0 / 3.0}, 500.0), -0.1);
}

TEST(Lyapunov, ChaoticReferenceValue) {
  for (Vec3 init : {Vec3{1.0, 1.0, 1.0}, Vec3{-3.0, 2.0, 20.0}}) {
    LyapunovOptions o;
    o.initial = init;
    EXPECT_NEAR(largest_lyapunov({10.0, 28.0, 8.0 / 3.0}, 2000.0, o), 0.906, 0.05);
  }
}

TEST(Lyapunov, MarginalCaseNearZero) {
  EXPECT_NEAR(largest_lyapunov({10.0, 1.0, 8.0 / 3.0}, 2000.0), 0.0, 0.02);
}

TEST(Lyapunov, RejectsShortRuns) {
  EXPECT_THROW(largest_lyapunov({10.0, 28.0, 8.0 / 3.0}, 100.0), std::invalid_argument);
}

TEST(Trend, SlopeAndClassification) {
  Trajectory t;
  for (int i = 0; i <= 100; ++i) {
    t.times.push_back(0.1 * i);
    const double v = std::exp(0.3 * 0.1 * i);
    t.states.push_back({v, 0.0, 0.0});
  }
  EXPECT_NEAR(log_norm_slope(t), 0.3, 1e-12);
  EXPECT_EQ(classify_trend(t), Trend::growing);
  for (auto& s : t.states) s = {1.0, 1.0, 1.0};
  EXPECT_EQ(classify_trend(t), Trend::neutral);
  EXPECT_STREQ(to_string(Trend::decaying), "decaying");
}

TEST(UniformTimes, Spacing) {
  const auto v = uniform_times(2.0, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 2.0);
  EXPECT_DOUBLE_EQ(v[1], 0.5);
  EXPECT_THROW(uniform_times(1.0, 1), std::invalid_argument);
}

}  // namespace
}  // namespace anelor
