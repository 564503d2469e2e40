#include "optomech/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "optomech/errors.hpp"
#include "optomech/physical.hpp"

namespace optomech {

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::OmegaPump: return "omega_pump";
    case SweepAxis::LambdaGain: return "lambda_gain";
    case SweepAxis::DriveE: return "E";
    case SweepAxis::Temperature: return "temperature";
  }
  return "?";
}

SweepAxis axis_from_name(const std::string& name) {
  for (SweepAxis a : {SweepAxis::OmegaPump, SweepAxis::LambdaGain, SweepAxis::DriveE,
                      SweepAxis::Temperature}) {
    if (axis_name(a) == name) return a;
  }
  throw ConfigError("unknown sweep axis '" + name +
                    "' (expected omega_pump, lambda_gain, E or temperature)");
}

void AxisRange::validate() const {
  if (points < 2) throw ConfigError("axis " + axis_name(axis) + ": points must be >= 2");
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw ConfigError("axis " + axis_name(axis) + ": range must be finite");
  }
  if (start == stop) throw ConfigError("axis " + axis_name(axis) + ": empty range");
  if (axis == SweepAxis::Temperature && std::min(start, stop) < 0.0) {
    throw ConfigError("axis temperature: values must be >= 0");
  }
  if ((axis == SweepAxis::DriveE || axis == SweepAxis::LambdaGain) && std::min(start, stop) < 0.0) {
    throw ConfigError("axis " + axis_name(axis) + ": values must be >= 0");
  }
}

std::vector<double> AxisRange::values() const {
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    v[i] = i == points - 1 ? stop : start + f * (stop - start);
  }
  return v;
}

void PointProtocol::validate() const {
  if (settle_periods < 0) throw ConfigError("settle_periods must be >= 0");
  if (measure_periods < 2) throw ConfigError("measure_periods must be >= 2");
  if (!(periodicity_tol > 0.0)) throw ConfigError("periodicity_tol must be > 0");
  if (stability_samples < 1) throw ConfigError("stability_samples must be >= 1");
  integrator.validate();
}

namespace {

double record_max_amplitude(const TrajectoryRecord& rec) {
  double m = 0.0;
  for (const auto& s : rec.states) m = std::max(m, s.abs_alpha());
  return m;
}

}  // namespace

PointObservables simulate_point(const SystemParams& params, const PointProtocol& protocol) {
  PointObservables obs;
  try {
    params.validate();
    protocol.validate();
    const double tau = params.modulation_period();
    const double t_settle = protocol.settle_periods * tau;
    const double t_end = (protocol.settle_periods + protocol.measure_periods) * tau;
    IntegratorConfig cfg = protocol.integrator;
    cfg.record_from = t_settle;

    TrajectoryRecord rec;
    std::vector<EntanglementSample> en;
    std::size_t warnings = 0;
    if (protocol.quantum) {
      const CovarianceState v0 = protocol.init_cov.value_or(CovarianceState::thermal(params.n_m));
      JointTrajectory jt = integrate_joint(params, protocol.init, v0, t_end, cfg, protocol.eps0);
      rec = std::move(jt.classical);
      en = std::move(jt.entanglement);
      warnings = jt.physicality_warnings.size();
    } else {
      rec = integrate_classical(params, protocol.init, protocol.eps0, t_end, cfg);
    }

    if (rec.divergent) {
      obs.status = "divergent";
      obs.abs_alpha_max = record_max_amplitude(rec);
      obs.periodicity.tag = Periodicity::Divergent;
      obs.periodicity.residual = std::numeric_limits<double>::infinity();
      obs.diagnostics = "state exceeded the overflow guard at t = " +
                        std::to_string(rec.stats.end_time);
      return obs;
    }

    obs.abs_alpha_max = period_max_amplitude(rec, tau);
    obs.q_em = steady_extreme_values(rec, tau, protocol.measure_periods);
    obs.periodicity = classify_periodicity_at(rec, tau, t_settle, protocol.measure_periods - 2,
                                              protocol.periodicity_tol);
    obs.stability = stability_check(params, rec, protocol.stability_samples);
    try {
      obs.lyapunov = lyapunov_exponent_envelope(rec, t_settle, t_end, tau);
    } catch (const NumericalError& e) {
      obs.diagnostics += std::string("lyapunov: ") + e.what() + "; ";
    }
    if (!obs.stability.stable) {
      obs.status = "unstable";
      obs.diagnostics += "drift matrix has eigenvalues with positive real part; ";
    } else if (protocol.quantum) {
      try {
        obs.en_max = en_max_over_period(en, tau);
      } catch (const NumericalError& e) {
        obs.status = "failed";
        obs.diagnostics += std::string("entanglement: ") + e.what() + "; ";
      }
    }
    if (warnings > 0) {
      obs.diagnostics += std::to_string(warnings) + " physicality warnings; ";
    }
    if (rec.stats.stiffness_detected) obs.diagnostics += "stiffness detected; ";
  } catch (const std::exception& e) {
    obs.status = "failed";
    obs.diagnostics += e.what();
  }
  while (!obs.diagnostics.empty() &&
         (obs.diagnostics.back() == ' ' || obs.diagnostics.back() == ';')) {
    obs.diagnostics.pop_back();
  }
  return obs;
}

void SweepSpec::validate() const {
  base.validate();
  protocol.validate();
  if (axes.empty() || axes.size() > 2) throw ConfigError("a sweep needs one or two axes");
  for (const auto& a : axes) a.validate();
  if (axes.size() == 2 && axes[0].axis == axes[1].axis) {
    throw ConfigError("sweep axes must be distinct");
  }
  if (!(mech_freq_hz > 0.0)) throw ConfigError("mech_freq_hz must be > 0");
}

SystemParams apply_axis(SystemParams p, SweepAxis axis, double value, double mech_freq_hz) {
  switch (axis) {
    case SweepAxis::OmegaPump: p.omega_pump = value; break;
    case SweepAxis::LambdaGain: p.lambda_gain = value; break;
    case SweepAxis::DriveE: p.E = value; break;
    case SweepAxis::Temperature: p.n_m = thermal_occupation(value, mech_freq_hz); break;
  }
  return p;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        f(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  SweepResult result;
  std::vector<std::vector<double>> grids;
  for (const auto& a : spec.axes) {
    result.axis_names.push_back(axis_name(a.axis));
    grids.push_back(a.values());
  }
  const std::size_t n0 = grids[0].size();
  const std::size_t n1 = grids.size() > 1 ? grids[1].size() : 1;
  result.rows.resize(n0 * n1);
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      SweepRow& row = result.rows[i * n1 + j];
      row.axis_values.push_back(grids[0][i]);
      row.params = apply_axis(spec.base, spec.axes[0].axis, grids[0][i], spec.mech_freq_hz);
      if (grids.size() > 1) {
        row.axis_values.push_back(grids[1][j]);
        row.params = apply_axis(row.params, spec.axes[1].axis, grids[1][j], spec.mech_freq_hz);
      }
    }
  }
  parallel_for(result.rows.size(), threads, [&](std::size_t k) {
    result.rows[k].obs = simulate_point(result.rows[k].params, spec.protocol);
  });
  return result;
}

CriticalGain detect_critical_gain(const SweepResult& result) {
  if (result.axis_names.size() != 1 || result.axis_names[0] != axis_name(SweepAxis::LambdaGain)) {
    throw ConfigError("detect_critical_gain needs a one-dimensional lambda_gain sweep");
  }
  const auto& rows = result.rows;
  CriticalGain cg;
  bool found = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].obs.periodicity.tag != Periodicity::Period2) continue;
    if (rows[i - 1].obs.periodicity.tag != Periodicity::Period1) continue;
    cg.last_period1 = rows[i - 1].axis_values[0];
    cg.first_period2 = rows[i].axis_values[0];
    found = true;
    break;
  }
  if (!found) throw NumericalError("no Period1 -> Period2 transition in the scanned gain range");
  cg.lambda_c = 0.5 * (cg.last_period1 + cg.first_period2);
  cg.uncertainty = std::abs(cg.first_period2 - cg.last_period1);

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (r.obs.lyapunov && *r.obs.lyapunov > best) {
      best = *r.obs.lyapunov;
      cg.lyapunov_peak = r.axis_values[0];
    }
  }
  return cg;
}

CriticalGain refine_critical_gain(const SweepSpec& spec, const CriticalGain& coarse, int factor,
                                  unsigned threads) {
  if (factor < 2) throw ConfigError("refine_critical_gain: factor must be >= 2");
  SweepSpec fine = spec;
  fine.axes = {AxisRange{SweepAxis::LambdaGain, coarse.last_period1, coarse.first_period2, factor + 1}};
  return detect_critical_gain(run_sweep(fine, threads));
}

ThermalRobustness temperature_robustness(const SystemParams& base, const std::vector<double>& lambdas,
                                         const AxisRange& temperatures,
                                         const PointProtocol& protocol, double mech_freq_hz,
                                         unsigned threads) {
  if (lambdas.empty()) throw ConfigError("temperature_robustness: no gains given");
  if (temperatures.axis != SweepAxis::Temperature) {
    throw ConfigError("temperature_robustness: axis must be temperature");
  }
  temperatures.validate();
  const std::vector<double> ts = temperatures.values();
  if (!std::is_sorted(ts.begin(), ts.end())) {
    throw ConfigError("temperature_robustness: temperature range must be increasing");
  }

  auto en_at = [&](double lambda, double T) -> std::optional<double> {
    SystemParams p = base;
    p.lambda_gain = lambda;
    p = apply_axis(p, SweepAxis::Temperature, T, mech_freq_hz);
    return simulate_point(p, protocol).en_max;
  };

  ThermalRobustness out;
  const std::size_t nl = lambdas.size(), nt = ts.size();
  // Column 0 is T = 0 itself, then the grid.
  std::vector<std::optional<double>> grid(nl * (nt + 1));
  parallel_for(grid.size(), threads, [&](std::size_t k) {
    const std::size_t l = k / (nt + 1), j = k % (nt + 1);
    grid[k] = en_at(lambdas[l], j == 0 ? 0.0 : ts[j - 1]);
  });

  out.summaries.resize(nl);
  parallel_for(nl, threads, [&](std::size_t l) {
    ThermalSummary& s = out.summaries[l];
    s.lambda_gain = lambdas[l];
    const auto e0 = grid[l * (nt + 1)];
    if (!e0) {
      s.flag = "E_N,max undefined at T = 0";
      return;
    }
    s.en_max_zero = *e0;
    if (!(*e0 >= kVanishingEntanglement)) {
      s.flag = "no entanglement at T = 0";
      return;
    }
    // First grid temperature where the entanglement is gone.
    double lo = 0.0, hi = -1.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const auto e = grid[l * (nt + 1) + j + 1];
      if (e && *e < kVanishingEntanglement) {
        hi = ts[j];
        break;
      }
      if (e) lo = ts[j];
    }
    if (hi < 0.0) {
      s.flag = "entanglement persists over the whole temperature range";
      return;
    }
    for (int it = 0; it < 40 && hi - lo > 1e-6 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto e = en_at(lambdas[l], mid);
      if (e && *e < kVanishingEntanglement) hi = mid; else lo = mid;
    }
    s.vanishing_temperature = hi;
    s.mu = *e0 / hi;
  });

  for (std::size_t l = 0; l < nl; ++l) {
    for (std::size_t j = 0; j < nt; ++j) {
      ThermalRow r;
      r.lambda_gain = lambdas[l];
      r.temperature = ts[j];
      r.n_m = thermal_occupation(ts[j], mech_freq_hz);
      r.en_max = grid[l * (nt + 1) + j + 1];
      if (r.en_max && out.summaries[l].en_max_zero > 0.0) {
        r.renormalized = *r.en_max / out.summaries[l].en_max_zero;
      }
      out.rows.push_back(r);
    }
  }
  return out;
}

std::vector<RootScanRow> scan_d_roots(const SystemParams& base, const AxisRange& drive) {
  if (drive.axis != SweepAxis::DriveE) throw ConfigError("scan_d_roots: axis must be E");
  drive.validate();
  std::vector<RootScanRow> rows;
  for (double e : drive.values()) {
    SystemParams p = base;
    p.E = e;
    rows.push_back({e, d_roots(p, solve_zeroth_order(p))});
  }
  return rows;
}

}  // namespace optomech
