#include "optomech/commands.hpp"

#include <chrono>
#include <sstream>

#include "json.hpp"
#include "optomech/analytic.hpp"
#include "optomech/errors.hpp"
#include "optomech/output.hpp"

namespace optomech {

namespace {

using nlohmann::json;

json number_or_null(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json();
}

json complex_json(cdouble z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json params_json(const SystemParams& p) {
  json j = json::object();
  for (const auto& [k, v] : to_key_values(p)) j[k] = v;
  return j;
}

json integrator_json(const IntegratorConfig& c) {
  return {{"method", "dormand-prince 5(4), dense output"},
          {"rel_tol", c.rel_tol},
          {"abs_tol", c.abs_tol},
          {"max_step", c.max_step},
          {"initial_step", c.initial_step},
          {"dense_samples_per_tau", c.dense_samples_per_tau}};
}

std::string render(const Table& t, OutputFormat f) {
  std::ostringstream os;
  if (f == OutputFormat::Csv) write_csv(os, t); else write_json(os, t);
  return os.str();
}

json base_metadata(Command cmd, const RunConfig& c, const RunOptions& o, const Table* table) {
  json m;
  m["schema_version"] = kSchemaVersion;
  m["library_version"] = OPTOMECH_VERSION;
  m["command"] = to_string(cmd);
  m["preset"] = c.preset ? json(*c.preset) : json();
  m["provenance"] = c.provenance;
  m["params"] = params_json(c.params);
  m["integrator"] = integrator_json(c.integrator);
  m["format"] = to_string(c.format);
  m["threads"] = o.threads;
  m["seed"] = o.seed ? json(*o.seed) : json();
  m["seed_note"] = "ignored: the model is deterministic";
  if (table) m["columns"] = table->columns;
  return m;
}

json protocol_json(const RunConfig& c) {
  return {{"settle_periods", c.sweep.settle_periods},
          {"measure_periods", c.sweep.measure_periods},
          {"periodicity_tol", c.sweep.periodicity_tol},
          {"stability_samples", c.sweep.stability_samples},
          {"mech_freq_hz", c.sweep.mech_freq_hz}};
}

json axes_json(const std::vector<AxisRange>& axes) {
  json a = json::array();
  for (const auto& r : axes) {
    a.push_back({{"axis", axis_name(r.axis)}, {"start", r.start}, {"stop", r.stop}, {"points", r.points}});
  }
  return a;
}

json critical_json(const CriticalGain& g) {
  return {{"lambda_c", g.lambda_c},
          {"uncertainty", g.uncertainty},
          {"last_period1", g.last_period1},
          {"first_period2", g.first_period2},
          {"lyapunov_peak", number_or_null(g.lyapunov_peak)}};
}

RunOutput simulate(const RunConfig& c, const RunOptions& o) {
  const SystemParams& p = c.params;
  const auto& s = c.simulate;
  const double tau = p.modulation_period();
  const double t_end = s.resolved_t_end(p);
  IntegratorConfig cfg = c.integrator;
  cfg.record_from = s.record_from_periods * tau;
  const CovarianceState v0 = s.thermal_init ? CovarianceState::thermal(p.n_m) : CovarianceState::vacuum();
  const std::optional<PerturbationState> eps =
      s.perturbation ? std::optional<PerturbationState>(s.eps0) : std::nullopt;
  const JointTrajectory jt = integrate_joint(p, s.init, v0, t_end, cfg, eps);

  const Table table = trajectory_table(jt, s.perturbation);
  json m = base_metadata(Command::Simulate, c, o, &table);
  m["t_end"] = t_end;
  m["tau"] = tau;
  m["record_from"] = cfg.record_from;
  m["initial_covariance"] = s.thermal_init ? "thermal" : "vacuum";
  m["samples"] = jt.classical.size();
  m["divergent"] = jt.classical.divergent;
  m["physicality_warnings"] = jt.physicality_warnings.size();
  m["max_asymmetry"] = jt.max_asymmetry;
  m["min_symplectic_eigenvalue"] = jt.min_symplectic;
  m["integration"] = {{"accepted", jt.classical.stats.accepted},
                      {"rejected", jt.classical.stats.rejected},
                      {"evaluations", jt.classical.stats.evaluations},
                      {"stiffness_detected", jt.classical.stats.stiffness_detected}};

  json summary = json::object();
  const double span = jt.classical.empty() ? 0.0 : jt.classical.times.back() - jt.classical.times.front();
  if (!jt.classical.divergent && span >= tau) {
    summary["abs_alpha_max_last_period"] = period_max_amplitude(jt.classical, tau);
    try {
      summary["E_N_max_last_period"] = en_max_over_period(jt.entanglement, tau);
    } catch (const NumericalError&) {
      summary["E_N_max_last_period"] = nullptr;
    }
  }
  if (!jt.classical.divergent && span >= 4.0 * tau) {
    const int window = static_cast<int>(span / tau) - 2;
    const auto pc = classify_periodicity(jt.classical, tau, std::min(window, kMeasurePeriods));
    summary["periodicity"] = to_string(pc.tag);
    summary["periodicity_residual"] = pc.residual;
    if (s.perturbation) {
      try {
        summary["lyapunov"] = lyapunov_exponent_envelope(jt.classical, jt.classical.times.front(),
                                                         jt.classical.times.back(), tau);
      } catch (const NumericalError&) {
        summary["lyapunov"] = nullptr;
      }
    }
  }
  m["summary"] = summary;
  return {render(table, c.format), m.dump(1) + "\n"};
}

RunOutput sweep(const RunConfig& c, const RunOptions& o) {
  const SweepOptions& w = c.sweep;
  if (w.kind == SweepKind::DRoots) {
    const Table table = roots_table(scan_d_roots(c.params, w.axes.at(0)));
    json m = base_metadata(Command::Sweep, c, o, &table);
    m["kind"] = to_string(w.kind);
    m["axes"] = axes_json(w.axes);
    return {render(table, c.format), m.dump(1) + "\n"};
  }
  if (w.kind == SweepKind::Thermal) {
    const ThermalRobustness tr = temperature_robustness(c.params, w.lambdas, w.axes.at(0),
                                                        c.protocol(), w.mech_freq_hz, o.threads);
    const Table table = thermal_table(tr);
    json m = base_metadata(Command::Sweep, c, o, &table);
    m["kind"] = to_string(w.kind);
    m["axes"] = axes_json(w.axes);
    m["lambdas"] = w.lambdas;
    m["protocol"] = protocol_json(c);
    m["vanishing_threshold"] = kVanishingEntanglement;
    json sums = json::array();
    for (const auto& s : tr.summaries) {
      sums.push_back({{"lambda_gain", s.lambda_gain},
                      {"E_N_max_T0", s.en_max_zero},
                      {"vanishing_temperature", number_or_null(s.vanishing_temperature)},
                      {"mu", number_or_null(s.mu)},
                      {"flag", s.flag}});
    }
    m["thermal"] = sums;
    return {render(table, c.format), m.dump(1) + "\n"};
  }

  const SweepSpec spec = c.sweep_spec();
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult result = run_sweep(spec, o.threads);
  const Table table = sweep_table(result);
  json m = base_metadata(Command::Sweep, c, o, &table);
  m["kind"] = to_string(w.kind);
  m["axes"] = axes_json(w.axes);
  m["protocol"] = protocol_json(c);
  if (result.axis_names.size() == 1 && result.axis_names[0] == axis_name(SweepAxis::LambdaGain)) {
    try {
      const CriticalGain cg = detect_critical_gain(result);
      json cj = critical_json(cg);
      if (w.refine_factor >= 2) {
        try {
          cj["refined"] = critical_json(refine_critical_gain(spec, cg, w.refine_factor, o.threads));
        } catch (const NumericalError& e) {
          cj["refined"] = {{"error", e.what()}};
        }
      }
      m["critical_gain"] = cj;
    } catch (const NumericalError& e) {
      m["critical_gain"] = {{"error", e.what()}};
    }
  }
  m["sweep_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {render(table, c.format), m.dump(1) + "\n"};
}

RunOutput analytic(const RunConfig& c, const RunOptions& o) {
  const SystemParams& p = c.params;
  const ZerothOrderSolution z = solve_zeroth_order(p);
  const FirstOrderSolution f = first_order_coeffs(p, z);
  const auto roots = d_roots(p, z);
  const auto [lo, hi] = predicted_entanglement_peaks(p, z);

  json r;
  r["q0"] = z.q0;
  r["p0"] = z.p0;
  r["a0"] = complex_json(z.a0);
  r["abs_a0"] = std::abs(z.a0);
  r["delta"] = z.delta_eff;
  r["multistable"] = z.multistable;
  r["branches"] = z.branches;
  r["a_plus"] = complex_json(f.a_plus);
  r["a_minus"] = complex_json(f.a_minus);
  r["eps_s"] = f.eps_s;
  json rj = json::array();
  for (const auto& x : roots) rj.push_back(complex_json(x));
  r["d_roots"] = rj;
  r["g0"] = effective_coupling(p, z);
  r["predicted_peaks"] = {lo, hi};

  json m = base_metadata(Command::Analytic, c, o, nullptr);
  std::string data;
  if (c.format == OutputFormat::Json) {
    data = r.dump(1) + "\n";
  } else {
    Table t;
    t.columns = {"key", "value"};
    auto add = [&](const std::string& k, Cell v) { t.rows.push_back({Cell::str(k), std::move(v)}); };
    add("q0", Cell::num(z.q0));
    add("p0", Cell::num(z.p0));
    add("a0_re", Cell::num(z.a0.real()));
    add("a0_im", Cell::num(z.a0.imag()));
    add("abs_a0", Cell::num(std::abs(z.a0)));
    add("delta", Cell::num(z.delta_eff));
    add("multistable", Cell::boolean(z.multistable));
    add("a_plus_re", Cell::num(f.a_plus.real()));
    add("a_plus_im", Cell::num(f.a_plus.imag()));
    add("a_minus_re", Cell::num(f.a_minus.real()));
    add("a_minus_im", Cell::num(f.a_minus.imag()));
    add("eps_s", Cell::num(f.eps_s));
    for (std::size_t i = 0; i < roots.size(); ++i) {
      add("d_root_" + std::to_string(i + 1) + "_re", Cell::num(roots[i].real()));
      add("d_root_" + std::to_string(i + 1) + "_im", Cell::num(roots[i].imag()));
    }
    add("g0", Cell::num(effective_coupling(p, z)));
    add("predicted_peak_lower", Cell::num(lo));
    add("predicted_peak_upper", Cell::num(hi));
    data = render(t, c.format);
  }
  return {data, m.dump(1) + "\n"};
}

RunOutput stability(const RunConfig& c, const RunOptions& o) {
  PointProtocol pp = c.protocol();
  pp.quantum = false;
  SweepResult result;
  if (c.sweep.axes.empty()) {
    result.rows.push_back({{}, c.params, simulate_point(c.params, pp)});
  } else {
    SweepSpec spec = c.sweep_spec();
    spec.protocol = pp;
    result = run_sweep(spec, o.threads);
  }
  const Table table = stability_table(result);
  json m = base_metadata(Command::Stability, c, o, &table);
  m["protocol"] = protocol_json(c);
  m["axes"] = axes_json(c.sweep.axes);
  m["criterion"] = "all eigenvalues of the drift matrix have negative real part over the final period";
  return {render(table, c.format), m.dump(1) + "\n"};
}

}  // namespace

RunOutput run_command(Command cmd, const RunConfig& config, const RunOptions& options) {
  config.validate(cmd);
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out;
  switch (cmd) {
    case Command::Simulate: out = simulate(config, options); break;
    case Command::Sweep: out = sweep(config, options); break;
    case Command::Analytic: out = analytic(config, options); break;
    case Command::Stability: out = stability(config, options); break;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json m = json::parse(out.metadata);
  m["wall_time_s"] = wall;
  out.metadata = m.dump(1) + "\n";
  return out;
}

}  // namespace optomech
