#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "anelor/lorenz_reduction.hpp"
#include "anelor/ode.hpp"
#include "anelor/projection.hpp"

namespace anelor {

/// Amplitudes of psi^{-1,1,1} (A) and of psi^{+1,1,1}, psi^{+1,0,2} (B, C).
struct ReducedState {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;

  Vec3 vec() const { return {A, B, C}; }
};

enum class Coordinates { reduced, lorenz };

/// Time samples of one solution. `times` are t for reduced coordinates and
/// s = d t for Lorenz coordinates.
struct Trajectory {
  Coordinates coordinates = Coordinates::reduced;
  std::vector<double> times;
  std::vector<Vec3> states;
  IntegratorStats stats;

  std::size_t size() const { return times.size(); }
};

/// n equally spaced times 0, t_end/(n-1), ..., t_end.
std::vector<double> uniform_times(double t_end, std::size_t n);

Trajectory integrate_reduced(const GalerkinCoeffs& coeffs, const ReducedState& initial,
                             double t_end, double rtol, double atol, std::size_t samples = 1001);

Trajectory integrate_reduced(const GalerkinCoeffs& coeffs, const ReducedState& initial,
                             std::span<const double> times, double rtol, double atol);

Trajectory integrate_lorenz(const LorenzParams& lp, const Vec3& initial, double s_end, double rtol,
                            double atol, std::size_t samples = 1001);

Trajectory integrate_lorenz(const LorenzParams& lp, const Vec3& initial,
                            std::span<const double> times, double rtol, double atol);

/// Pointwise X = aA, Y = bB, Z = cC with s = d t.
Trajectory map_trajectory(const Trajectory& reduced, const ScalingMap& map);

/// Max-norm distance between two trajectories sampled at the same times.
double max_state_deviation(const Trajectory& a, const Trajectory& b);

struct LyapunovOptions {
  Vec3 initial{1.0, 1.0, 1.0};
  double transient = 50.0;
  double renormalization_interval = 1.0;
  double rtol = 1e-10;
  double atol = 1e-12;
};

/// Benettin estimate of the largest Lyapunov exponent of the Lorenz flow:
/// one tangent vector, renormalized every interval, over s in (0, s_end]
/// after a discarded transient. Requires s_end >= 500.
double largest_lyapunov(const LorenzParams& lp, double s_end, const LyapunovOptions& options = {});

/// Least-squares slope of log ||state|| over the trailing half of the samples.
double log_norm_slope(const Trajectory& traj);

enum class Trend { decaying, growing, neutral };

inline constexpr double kTrendThreshold = 1e-3;

Trend classify_trend(const Trajectory& traj, double threshold = kTrendThreshold);

const char* to_string(Trend t);

}  // namespace anelor
