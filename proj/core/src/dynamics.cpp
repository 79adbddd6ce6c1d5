#include "anelor/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anelor {

namespace {

void check_tolerances(double rtol, double atol) {
  if (!(rtol > 0.0 && rtol < 1.0 && atol > 0.0 && atol < 1.0)) {
    throw std::invalid_argument("tolerances must lie in (0, 1)");
  }
}

void check_times(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("need at least one output time");
  if (times.front() != 0.0) throw std::invalid_argument("output times must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("output times must increase strictly");
  }
  if (!(times.back() > 0.0)) throw std::invalid_argument("end time must be > 0");
}

template <typename Rhs>
Trajectory solve(Rhs&& rhs, const Vec3& y0, std::span<const double> times, double rtol, double atol,
                 Coordinates coords) {
  check_tolerances(rtol, atol);
  check_times(times);
  for (double v : y0) {
    if (!std::isfinite(v)) throw std::invalid_argument("initial state must be finite");
  }
  DormandPrince45<3> stepper({.rtol = rtol, .atol = atol});
  Trajectory traj;
  traj.coordinates = coords;
  traj.times.assign(times.begin(), times.end());
  stepper.integrate([&](double, const Vec3& y) { return rhs(y); }, y0, 0.0, times.back(), times,
                    traj.states);
  traj.stats = stepper.stats();
  return traj;
}

}  // namespace

std::vector<double> uniform_times(double t_end, std::size_t n) {
  if (n < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
  t.back() = t_end;
  return t;
}

Trajectory integrate_reduced(const GalerkinCoeffs& coeffs, const ReducedState& initial,
                             std::span<const double> times, double rtol, double atol) {
  return solve([&](const Vec3& y) { return reduced_vector_field(coeffs, y); }, initial.vec(), times,
               rtol, atol, Coordinates::reduced);
}

Trajectory integrate_reduced(const GalerkinCoeffs& coeffs, const ReducedState& initial,
                             double t_end, double rtol, double atol, std::size_t samples) {
  const auto times = uniform_times(t_end, samples);
  return integrate_reduced(coeffs, initial, times, rtol, atol);
}

Trajectory integrate_lorenz(const LorenzParams& lp, const Vec3& initial,
                            std::span<const double> times, double rtol, double atol) {
  lp.validate();
  return solve([&](const Vec3& y) { return lorenz_vector_field(lp, y); }, initial, times, rtol, atol,
               Coordinates::lorenz);
}

Trajectory integrate_lorenz(const LorenzParams& lp, const Vec3& initial, double s_end, double rtol,
                            double atol, std::size_t samples) {
  const auto times = uniform_times(s_end, samples);
  return integrate_lorenz(lp, initial, times, rtol, atol);
}

Trajectory map_trajectory(const Trajectory& reduced, const ScalingMap& map) {
  if (!(map.d > 0.0)) throw std::invalid_argument("time scaling d must be positive");
  Trajectory out;
  out.coordinates = Coordinates::lorenz;
  out.stats = reduced.stats;
  out.times.reserve(reduced.size());
  out.states.reserve(reduced.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    out.times.push_back(reduced.times[i] * map.d);
    out.states.push_back(map.to_lorenz(reduced.states[i]));
  }
  return out;
}

double max_state_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trajectories differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(a.states[i][k] - b.states[i][k]));
  }
  return worst;
}

double largest_lyapunov(const LorenzParams& lp, double s_end, const LyapunovOptions& options) {
  lp.validate();
  if (!(s_end >= 500.0)) throw std::invalid_argument("Lyapunov estimate needs s_end >= 500");
  if (!(options.renormalization_interval > 0.0)) {
    throw std::invalid_argument("renormalization interval must be positive");
  }

  // State and one tangent vector, integrated together.
  using State6 = std::array<double, 6>;
  auto rhs = [&](double, const State6& u) {
    const Vec3 f = lorenz_vector_field(lp, {u[0], u[1], u[2]});
    const double x = u[0], y = u[1], z = u[2];
    const double vx = u[3], vy = u[4], vz = u[5];
    return State6{f[0], f[1], f[2],
                  lp.sigma * (vy - vx),
                  (lp.r - z) * vx - vy - x * vz,
                  y * vx + x * vy - lp.delta * vz};
  };
  DormandPrince45<6> stepper({.rtol = options.rtol, .atol = options.atol});

  State6 u{options.initial[0], options.initial[1], options.initial[2], 1.0, 0.0, 0.0};
  if (options.transient > 0.0) u = stepper.advance(rhs, u, 0.0, options.transient);
  u[3] = 1.0 / std::sqrt(3.0);
  u[4] = 1.0 / std::sqrt(3.0);
  u[5] = 1.0 / std::sqrt(3.0);

  const double dt = options.renormalization_interval;
  const long segments = static_cast<long>(std::ceil(s_end / dt));
  double log_growth = 0.0;
  double s = 0.0;
  for (long i = 0; i < segments; ++i) {
    const double s_next = std::min(s_end, s + dt);
    u = stepper.advance(rhs, u, s, s_next);
    const double norm = std::sqrt(u[3] * u[3] + u[4] * u[4] + u[5] * u[5]);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("tangent vector degenerated");
    log_growth += std::log(norm);
    u[3] /= norm;
    u[4] /= norm;
    u[5] /= norm;
    s = s_next;
  }
  return log_growth / s_end;
}

double log_norm_slope(const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n < 4) throw std::invalid_argument("need at least four samples for a trend");
  const std::size_t start = n / 2;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  double count = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    const auto& y = traj.states[i];
    const double norm = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    // The origin itself carries no trend.
    if (norm == 0.0) return 0.0;
    const double t = traj.times[i];
    const double ly = std::log(norm);
    st += t;
    sy += ly;
    stt += t * t;
    sty += t * ly;
    count += 1.0;
  }
  const double denom = count * stt - st * st;
  return (count * sty - st * sy) / denom;
}

Trend classify_trend(const Trajectory& traj, double threshold) {
  const double slope = log_norm_slope(traj);
  if (slope < -threshold) return Trend::decaying;
  if (slope > threshold) return Trend::growing;
  return Trend::neutral;
}

const char* to_string(Trend t) {
  switch (t) {
    case Trend::decaying: return "decaying";
    case Trend::growing: return "growing";
    case Trend::neutral: return "neutral";
  }
  return "unknown";
}

}  // namespace anelor
