#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.25;     // 1/omega_m
  double initial_step = 0.0;  // 0 selects a step from the local derivative scale
  int dense_samples_per_tau = 256;
  double record_from = 0.0;   // dense samples before this time are not emitted

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("integrator tolerances must be > 0");
    if (!(max_step > 0.0)) throw ConfigError("max_step must be > 0");
    if (initial_step < 0.0) throw ConfigError("initial_step must be >= 0");
    if (dense_samples_per_tau < 64) throw ConfigError("dense_samples_per_tau must be >= 64");
    if (!(record_from >= 0.0)) throw ConfigError("record_from must be >= 0");
  }

  IntegratorConfig with_tolerance_scale(double factor) const {
    IntegratorConfig c = *this;
    c.rel_tol *= factor;
    c.abs_tol *= factor;
    return c;
  }
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
  bool stiffness_detected = false;
  bool diverged = false;
  double end_time = 0.0;
};

/// Any state component beyond this magnitude is treated as divergence.
inline constexpr double kOverflowGuard = 1e12;

template <std::size_t N>
using StateVector = std::array<double, N>;

namespace detail {

// Dormand-Prince 5(4) tableau with Hairer's 4th-order continuous extension.
struct DP54 {
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                          a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) integration with dense output.
///
/// `rhs(t, y, dydt)` fills the derivative. `observe(t, y)` is called at every
/// sample time t0 + k * sample_dt that is >= cfg.record_from and <= t_end, and
/// once more at t_end when t_end is not on the grid. Only the first
/// `error_dims` components enter the error norm; the remaining components are
/// carried along on the same step sequence (used for variational equations
/// whose scale is arbitrary).
///
/// Divergence (non-finite state or |y_i| > kOverflowGuard) stops integration
/// and is reported through IntegrationStats::diverged; a finite offending
/// state is passed to `observe` as the last sample. Step-size underflow
/// throws IntegrationFailure.
template <std::size_t N, class Rhs, class Observer>
IntegrationStats integrate_dense(Rhs&& rhs, double t0, StateVector<N> y, double t_end,
                                 double sample_dt, const IntegratorConfig& cfg,
                                 std::size_t error_dims, Observer&& observe) {
  using T = detail::DP54;
  using Vec = StateVector<N>;
  cfg.validate();
  if (!(t_end > t0)) throw ConfigError("t_end must be greater than the start time");
  if (!(sample_dt > 0.0)) throw ConfigError("sample spacing must be > 0");
  error_dims = std::clamp<std::size_t>(error_dims, 1, N);

  IntegrationStats stats;
  const double eps = std::numeric_limits<double>::epsilon();

  // Sample grid: index k maps to t0 + k * sample_dt.
  const double span = t_end - t0;
  const auto last_index = static_cast<long long>(std::floor(span / sample_dt * (1.0 + 4.0 * eps) + 1e-9));
  long long next_index = 0;
  if (cfg.record_from > t0) {
    next_index = static_cast<long long>(std::ceil((cfg.record_from - t0) / sample_dt - 1e-9));
  }
  const bool tail_sample = std::abs(t0 + static_cast<double>(last_index) * sample_dt - t_end) > 1e-9 * std::max(1.0, std::abs(t_end));
  auto sample_time = [&](long long k) {
    return k == last_index && !tail_sample ? t_end : t0 + static_cast<double>(k) * sample_dt;
  };

  Vec k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, ystage6{}, ynew{}, yerr{};
  std::array<Vec, 5> rcont{};

  auto eval = [&](double t, const Vec& state, Vec& out) {
    rhs(t, state, out);
    ++stats.evaluations;
  };

  auto error_norm = [&](const Vec& a, const Vec& b, const Vec& err) {
    double sum = 0.0;
    for (std::size_t i = 0; i < error_dims; ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
      const double r = err[i] / sc;
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(error_dims));
  };

  auto diverged = [&](const Vec& v) {
    for (double x : v) {
      if (!std::isfinite(x) || std::abs(x) > kOverflowGuard) return true;
    }
    return false;
  };

  double t = t0;
  if (diverged(y)) {
    stats.diverged = true;
    stats.end_time = t;
    return stats;
  }
  eval(t, y, k1);

  if (next_index == 0 && next_index <= last_index) {
    observe(sample_time(0), y);
    ++next_index;
  }

  double h = cfg.initial_step;
  if (h <= 0.0) {
    // Initial step guess (Hairer, Norsett & Wanner, II.4).
    const double d0 = error_norm(y, y, y);
    const double d1 = error_norm(y, y, k1);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, cfg.max_step);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h0 * k1[i];
    eval(t + h0, ytmp, k2);
    Vec diff{};
    for (std::size_t i = 0; i < N; ++i) diff[i] = (k2[i] - k1[i]);
    const double d2 = error_norm(y, y, diff) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    h = std::min({100.0 * h0, h1, cfg.max_step});
  }
  h = std::min(h, t_end - t);

  double facold = 1e-4;
  constexpr double safe = 0.9, facl = 0.2, facr = 10.0, beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  int stiff_hits = 0, non_stiff = 0;
  bool last_rejected = false;

  while (t < t_end) {
    if (h < 10.0 * eps * std::max(1.0, std::abs(t))) {
      throw IntegrationFailure("step size underflow at t = " + std::to_string(t), t);
    }
    const bool final_step = t + 1.01 * h >= t_end;
    if (final_step) h = t_end - t;

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * T::a21 * k1[i];
    eval(t + T::c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (T::a31 * k1[i] + T::a32 * k2[i]);
    eval(t + T::c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
    eval(t + T::c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] + T::a54 * k4[i]);
    eval(t + T::c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      ystage6[i] = y[i] + h * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] +
                               T::a64 * k4[i] + T::a65 * k5[i]);
    const double t_new = final_step ? t_end : t + h;
    eval(t_new, ystage6, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (T::a71 * k1[i] + T::a73 * k3[i] + T::a74 * k4[i] + T::a75 * k5[i] +
                            T::a76 * k6[i]);
    eval(t_new, ynew, k7);
    for (std::size_t i = 0; i < N; ++i)
      yerr[i] = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                     T::e6 * k6[i] + T::e7 * k7[i]);

    double err = error_norm(y, ynew, yerr);
    if (!std::isfinite(err)) err = 1e10;
    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::clamp(fac / safe, 1.0 / facr, 1.0 / facl);
    double h_next = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      ++stats.accepted;

      // Stiffness heuristic: ratio of the stage-6/7 derivative difference.
      double stnum = 0.0, stden = 0.0;
      for (std::size_t i = 0; i < error_dims; ++i) {
        stnum += (k7[i] - k6[i]) * (k7[i] - k6[i]);
        stden += (ynew[i] - ystage6[i]) * (ynew[i] - ystage6[i]);
      }
      if (stden > 0.0 && h * std::sqrt(stnum / stden) > 3.25) {
        non_stiff = 0;
        if (++stiff_hits == 15) stats.stiffness_detected = true;
      } else if (++non_stiff == 6) {
        stiff_hits = 0;
      }

      for (std::size_t i = 0; i < N; ++i) {
        const double dy = ynew[i] - y[i];
        const double bspl = h * k1[i] - dy;
        rcont[0][i] = y[i];
        rcont[1][i] = dy;
        rcont[2][i] = bspl;
        rcont[3][i] = dy - h * k7[i] - bspl;
        rcont[4][i] = h * (T::d1 * k1[i] + T::d3 * k3[i] + T::d4 * k4[i] + T::d5 * k5[i] +
                           T::d6 * k6[i] + T::d7 * k7[i]);
      }

      if (diverged(ynew)) {
        stats.diverged = true;
        stats.end_time = t_new;
        if (std::all_of(ynew.begin(), ynew.end(), [](double x) { return std::isfinite(x); })) {
          observe(t_new, ynew);
        }
        return stats;
      }

      while (next_index <= last_index) {
        const double ts = sample_time(next_index);
        if (ts > t_new) break;
        const double th = (ts - t) / h;
        const double th1 = 1.0 - th;
        Vec ys{};
        for (std::size_t i = 0; i < N; ++i) {
          ys[i] = rcont[0][i] +
                  th * (rcont[1][i] + th1 * (rcont[2][i] + th * (rcont[3][i] + th1 * rcont[4][i])));
        }
        if (ts == t_new) ys = ynew;
        observe(ts, ys);
        ++next_index;
      }

      k1 = k7;
      y = ynew;
      t = t_new;
      h_next = std::min(h_next, cfg.max_step);
      if (last_rejected) h_next = std::min(h_next, h);
      last_rejected = false;
    } else {
      h_next = h / std::min(1.0 / facl, fac11 / safe);
      last_rejected = true;
      ++stats.rejected;
    }
    h = h_next;
  }

  if (tail_sample) {
    observe(t_end, y);
  }
  stats.end_time = t;
  return stats;
}

}  // namespace optomech
