#include "optomech/classical.hpp"

#include <algorithm>
#include <cmath>

#include "optomech/errors.hpp"

namespace optomech {

ClassicalState mean_field_rhs(double t, const ClassicalState& s, const SystemParams& params) {
  const double phase = params.omega_pump * t - params.theta;
  const double rc = 2.0 * params.lambda_gain * std::cos(phase);
  const double rs = 2.0 * params.lambda_gain * std::sin(phase);
  const double detuning = params.delta0 - params.g * s.q;
  return {
      params.omega_m * s.p,
      -params.omega_m * s.q - params.gamma_m * s.p + params.g * s.intensity(),
      detuning * s.alpha_i - params.kappa * s.alpha_r + params.E + rc * s.alpha_r - rs * s.alpha_i,
      -detuning * s.alpha_r - params.kappa * s.alpha_i - rc * s.alpha_i - rs * s.alpha_r,
  };
}

PerturbationState perturbation_rhs(double t, const ClassicalState& s, const PerturbationState& e,
                                   const SystemParams& params) {
  const double phase = params.omega_pump * t - params.theta;
  const double rc = 2.0 * params.lambda_gain * std::cos(phase);
  const double rs = 2.0 * params.lambda_gain * std::sin(phase);
  const double detuning = params.delta0 - params.g * s.q;
  return {
      params.omega_m * e.eps_p,
      -params.omega_m * e.eps_q - params.gamma_m * e.eps_p +
          2.0 * params.g * (s.alpha_i * e.eps_ai + s.alpha_r * e.eps_ar),
      detuning * e.eps_ai - params.g * s.alpha_i * e.eps_q - params.kappa * e.eps_ar +
          rc * e.eps_ar - rs * e.eps_ai,
      -detuning * e.eps_ar + params.g * s.alpha_r * e.eps_q - params.kappa * e.eps_ai -
          rc * e.eps_ai - rs * e.eps_ar,
  };
}

namespace {

template <std::size_t N>
TrajectoryRecord run_classical(const SystemParams& params, const ClassicalState& init,
                               const PerturbationState& init_eps, double t_end,
                               const IntegratorConfig& cfg) {
  StateVector<N> y{};
  y[0] = init.q;
  y[1] = init.p;
  y[2] = init.alpha_r;
  y[3] = init.alpha_i;
  if constexpr (N == 8) {
    y[4] = init_eps.eps_q;
    y[5] = init_eps.eps_p;
    y[6] = init_eps.eps_ar;
    y[7] = init_eps.eps_ai;
  }

  auto rhs = [&params](double t, const StateVector<N>& v, StateVector<N>& dv) {
    const ClassicalState s{v[0], v[1], v[2], v[3]};
    const ClassicalState ds = mean_field_rhs(t, s, params);
    dv[0] = ds.q;
    dv[1] = ds.p;
    dv[2] = ds.alpha_r;
    dv[3] = ds.alpha_i;
    if constexpr (N == 8) {
      const PerturbationState de =
          perturbation_rhs(t, s, PerturbationState{v[4], v[5], v[6], v[7]}, params);
      dv[4] = de.eps_q;
      dv[5] = de.eps_p;
      dv[6] = de.eps_ar;
      dv[7] = de.eps_ai;
    }
  };

  TrajectoryRecord rec;
  if constexpr (N == 8) {
    rec.eps.emplace();
    rec.eps_ic.emplace();
  }
  const double dt = params.modulation_period() / cfg.dense_samples_per_tau;
  const auto expected = static_cast<std::size_t>(std::max(0.0, (t_end - cfg.record_from) / dt)) + 2;
  rec.times.reserve(expected);
  rec.states.reserve(expected);

  auto observe = [&rec](double t, const StateVector<N>& v) {
    const ClassicalState s{v[0], v[1], v[2], v[3]};
    rec.times.push_back(t);
    rec.states.push_back(s);
    if constexpr (N == 8) {
      const PerturbationState e{v[4], v[5], v[6], v[7]};
      rec.eps->push_back(e);
      rec.eps_ic->push_back(intensity_deviation(s, e));
    }
  };

  rec.stats = integrate_dense<N>(rhs, 0.0, y, t_end, dt, cfg, 4, observe);
  rec.divergent = rec.stats.diverged;
  return rec;
}

}  // namespace

TrajectoryRecord integrate_classical(const SystemParams& params, const ClassicalState& init,
                                     const std::optional<PerturbationState>& init_eps,
                                     double t_end, const IntegratorConfig& cfg) {
  params.validate();
  cfg.validate();
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be > 0");
  if (!init.finite()) throw ConfigError("initial classical state is not finite");
  if (init_eps) return run_classical<8>(params, init, *init_eps, t_end, cfg);
  return run_classical<4>(params, init, {}, t_end, cfg);
}

ClassicalState interpolate_state(const TrajectoryRecord& traj, const SystemParams& params, double t) {
  if (traj.empty()) throw ConfigError("empty trajectory");
  const auto& ts = traj.times;
  if (t <= ts.front()) return traj.states.front();
  if (t >= ts.back()) return traj.states.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i1 = static_cast<std::size_t>(it - ts.begin());
  const std::size_t i0 = i1 - 1;
  const double h = ts[i1] - ts[i0];
  const double s = (t - ts[i0]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  const ClassicalState& a = traj.states[i0];
  const ClassicalState& b = traj.states[i1];
  const ClassicalState da = mean_field_rhs(ts[i0], a, params);
  const ClassicalState db = mean_field_rhs(ts[i1], b, params);
  auto mix = [&](double ya, double dya, double yb, double dyb) {
    return h00 * ya + h10 * h * dya + h01 * yb + h11 * h * dyb;
  };
  return {mix(a.q, da.q, b.q, db.q), mix(a.p, da.p, b.p, db.p),
          mix(a.alpha_r, da.alpha_r, b.alpha_r, db.alpha_r),
          mix(a.alpha_i, da.alpha_i, b.alpha_i, db.alpha_i)};
}

}  // namespace optomech
