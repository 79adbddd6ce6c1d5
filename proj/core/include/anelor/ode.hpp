#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "anelor/errors.hpp"

namespace anelor {

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects a step automatically
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
  double rtol = 0.0;
  double atol = 0.0;
};

/// Dormand-Prince 5(4) with PI step-size control and the 4th-order dense
/// output of Hairer, Norsett & Wanner (DOPRI5).
template <std::size_t N>
class DormandPrince45 {
 public:
  using State = std::array<double, N>;

  explicit DormandPrince45(IntegratorOptions options = {}) : opt_(options) {
    if (!(opt_.rtol > 0.0 && opt_.rtol < 1.0) || !(opt_.atol > 0.0 && opt_.atol < 1.0)) {
      throw std::invalid_argument("integrator tolerances must lie in (0, 1)");
    }
  }

  /// Integrates y' = f(t, y) from (t0, y0) to t_end and writes the dense
  /// solution at each of `times` (non-decreasing, inside [t0, t_end]) into
  /// `out`. Returns the state at t_end.
  template <typename Rhs>
  State integrate(Rhs&& f, State y, double t0, double t_end, std::span<const double> times,
                  std::vector<State>& out) {
    if (!(t_end >= t0)) throw std::invalid_argument("t_end must not precede t0");
    out.clear();
    out.reserve(times.size());
    std::size_t next = 0;
    while (next < times.size() && times[next] <= t0) {
      out.push_back(y);
      ++next;
    }
    if (t_end == t0) return y;

    double t = t0;
    State k1 = f(t, y);
    ++stats_.evaluations;
    double h = opt_.initial_step > 0.0 ? opt_.initial_step : initial_step(f, t, y, k1, t_end - t0);
    double err_old = 1e-4;
    bool last_rejected = false;

    for (long step = 0;; ++step) {
      if (step >= opt_.max_steps) throw NumericalError("integrator exceeded max_steps");
      if (0.1 * h <= std::abs(t) * std::numeric_limits<double>::epsilon() || h <= 0.0) {
        throw NumericalError("integrator step size underflow at t = " + std::to_string(t));
      }
      bool last = false;
      if (t + 1.01 * h >= t_end) {
        h = t_end - t;
        last = true;
      }

      State k2, k3, k4, k5, k6, k7, y1, ytmp;
      for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
      k2 = f(t + c2 * h, ytmp);
      for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      k3 = f(t + c3 * h, ytmp);
      for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = f(t + c4 * h, ytmp);
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = f(t + c5 * h, ytmp);
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      k6 = f(t + h, ytmp);
      for (std::size_t i = 0; i < N; ++i)
        y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      k7 = f(t + h, y1);
      stats_.evaluations += 6;

      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sk = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
        err += (e / sk) * (e / sk);
      }
      err = std::sqrt(err / static_cast<double>(N));
      if (!std::isfinite(err)) throw NumericalError("non-finite state at t = " + std::to_string(t));

      const double fac11 = std::pow(err, kExpo1);
      if (err <= 1.0) {
        double fac = fac11 / std::pow(err_old, kBeta);
        fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
        double h_new = std::min(h / fac, opt_.max_step);
        if (last_rejected) h_new = std::min(h_new, h);
        err_old = std::max(err, 1e-4);
        ++stats_.accepted;
        last_rejected = false;

        const double t1 = last ? t_end : t + h;
        while (next < times.size() && times[next] <= t1) {
          out.push_back(times[next] == t1 ? y1 : dense(y, y1, k1, k3, k4, k5, k6, k7, h, (times[next] - t) / h));
          ++next;
        }
        y = y1;
        k1 = k7;
        t = t1;
        if (last) break;
        h = h_new;
      } else {
        h /= std::min(1.0 / kFacMin, fac11 / kSafe);
        ++stats_.rejected;
        last_rejected = true;
      }
    }
    while (next < times.size()) {
      out.push_back(y);
      ++next;
    }
    return y;
  }

  /// Integrates without dense output; returns the state at t_end.
  template <typename Rhs>
  State advance(Rhs&& f, const State& y, double t0, double t_end) {
    std::vector<State> none;
    return integrate(f, y, t0, t_end, std::span<const double>(), none);
  }

  IntegratorStats stats() const {
    IntegratorStats s = stats_;
    s.rtol = opt_.rtol;
    s.atol = opt_.atol;
    return s;
  }

 private:
  template <typename Rhs>
  double initial_step(Rhs& f, double t, const State& y, const State& f0, double span) {
    double dnf = 0.0;
    double dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
      dnf += (f0[i] / sk) * (f0[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min({h, opt_.max_step, span});
    State y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h * f0[i];
    const State f1 = f(t + h, y1);
    ++stats_.evaluations;
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
      der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, opt_.max_step, span});
  }

  static State dense(const State& y0, const State& y1, const State& k1, const State& k3,
                     const State& k4, const State& k5, const State& k6, const State& k7, double h,
                     double theta) {
    const double theta1 = 1.0 - theta;
    State out;
    for (std::size_t i = 0; i < N; ++i) {
      const double ydiff = y1[i] - y0[i];
      const double bspl = h * k1[i] - ydiff;
      const double r4 = ydiff - h * k7[i] - bspl;
      const double r5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      out[i] = y0[i] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
    }
    return out;
  }

  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                          a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                          a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  static constexpr double kBeta = 0.04;  // PI gain
  static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
  static constexpr double kSafe = 0.9;
  static constexpr double kFacMin = 0.2;
  static constexpr double kFacMax = 10.0;

  IntegratorOptions opt_;
  IntegratorStats stats_;
};

}  // namespace anelor
