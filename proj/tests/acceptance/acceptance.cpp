// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/analytic.hpp"
#include "optomech/classical.hpp"
#include "optomech/config.hpp"
#include "optomech/presets.hpp"
#include "optomech/quantum.hpp"
#include "optomech/sweep.hpp"
#include "support/oracles.hpp"

using namespace optomech;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator()(const std::string& key, const T& v) {
    if (!os_.str().empty()) os_ << ' ';
    os_ << key << '=' << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig preset(const std::string& name) { return parse_config("preset = " + name + "\n"); }

// Sweeps are shared between criteria; each preset runs once.
const SweepResult& sweep_of(const std::string& name) {
  static std::map<std::string, SweepResult> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, run_sweep(preset(name).sweep_spec())).first;
  return it->second;
}

const SweepRow& row_at(const SweepResult& r, double lambda) {
  for (const auto& row : r.rows) {
    if (std::abs(row.axis_values[0] - lambda) < 1e-9) return row;
  }
  throw std::runtime_error("grid point not found");
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(i);
  }
  return out;
}

TrajectoryRecord late_record(const SystemParams& p, double periods, double from, bool eps,
                             const IntegratorConfig& base = {}) {
  IntegratorConfig cfg = base;
  const double tau = p.modulation_period();
  cfg.record_from = from * tau;
  std::optional<PerturbationState> e;
  if (eps) e = kDefaultPerturbation;
  return integrate_classical(p, {}, e, periods * tau, cfg);
}

Verdict analytic_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = preset("fig1").params;
  const auto rec = late_record(p, 300, 299, false);
  const auto z = solve_zeroth_order(p);
  const auto f = first_order_coeffs(p, z);
  double scale = 0.0, err = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const double an = std::abs(analytic_mean(rec.times[i], z, f, p));
    scale = std::max(scale, an);
    err = std::max(err, std::abs(rec.states[i].abs_alpha() - an));
  }
  const double rel = err / scale, secs = seconds_since(t0);
  return {rel < 0.02 && secs < 10.0, Detail()("sup_rel_error", rel)("seconds", secs).str()};
}

Verdict critical_gain() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& r = sweep_of("fig6");
  const double secs = seconds_since(t0);
  const auto cg = detect_critical_gain(r);
  const bool ok = std::abs(cg.lambda_c - 0.043) <= 0.002 && secs < 300.0;
  return {ok, Detail()("lambda_c", cg.lambda_c)("uncertainty", cg.uncertainty)("points", r.rows.size())(
                  "seconds", secs).str()};
}

Verdict regime_classification() {
  const auto base = preset("fig6").params;
  auto at = [&](double lambda) {
    SystemParams p = base;
    p.lambda_gain = lambda;
    return p;
  };
  const double tol = kDefaultPeriodicityTol;
  const auto p03 = simulate_point(at(0.03), PointProtocol{});
  const auto p05 = simulate_point(at(0.05), PointProtocol{});

  const SystemParams pc = at(0.043);
  const double tau = pc.modulation_period();
  const auto rec = late_record(pc, 300, 0, true);
  const auto early = classify_periodicity_at(rec, tau, 30 * tau, 8, tol);
  const auto late = classify_periodicity_at(rec, tau, 290 * tau, 8, tol);
  const bool early_doubled = early.residual_tau >= 10 * tol && early.residual_two_tau < early.residual_tau / 10;
  const bool late_sine = late.residual_tau < 10 * tol && late.residual_tau < early.residual_tau / 10;

  std::map<double, double> decay;
  for (double lambda : {0.03, 0.043, 0.05}) {
    const auto r = lambda == 0.043 ? rec : late_record(at(lambda), 300, 0, true);
    decay[lambda] = std::abs(lyapunov_exponent_envelope(r, 30 * tau, 300 * tau, tau));
  }
  const bool slowest = decay[0.043] < decay[0.03] && decay[0.043] < decay[0.05];
  const bool ok = p03.periodicity.tag == Periodicity::Period1 && p05.periodicity.tag == Periodicity::Period2 &&
                  early_doubled && late_sine && slowest;
  return {ok, Detail()("tag_0.03", to_string(p03.periodicity.tag))("tag_0.05", to_string(p05.periodicity.tag))(
                  "early_r1", early.residual_tau)("early_r2", early.residual_two_tau)("late_r1", late.residual_tau)(
                  "decay_0.03", decay[0.03])("decay_0.043", decay[0.043])("decay_0.05", decay[0.05])
                  .str()};
}

Verdict lyapunov_structure() {
  const auto& r = sweep_of("fig6");
  auto lam = [&](double l) { return row_at(r, l).obs.lyapunov.value(); };
  double worst = -INFINITY;
  for (const auto& row : r.rows) worst = std::max(worst, row.obs.lyapunov.value_or(INFINITY));
  const double l42 = lam(0.042), l43 = lam(0.043), l44 = lam(0.044);
  const bool ok = lam(0.03) < 0 && lam(0.05) < 0 && std::abs(l43) < std::abs(l42) &&
                  std::abs(l43) < std::abs(l44) && worst <= 0;
  return {ok, Detail()("l_0.03", lam(0.03))("l_0.042", l42)("l_0.043", l43)("l_0.044", l44)("l_0.05", lam(0.05))(
                  "max", worst).str()};
}

Verdict entanglement_cusp() {
  const auto spec = preset("fig6").sweep_spec();
  const auto& r = sweep_of("fig6");
  const auto cg = detect_critical_gain(r);
  const double h = spec.axes[0].spacing();
  auto en = [&](double l) { return row_at(r, l).obs.en_max.value(); };
  const double a = cg.last_period1, b = cg.first_period2;
  const double s_before = (en(a) - en(a - h)) / h;
  const double s_across = (en(b) - en(a)) / h;
  const double s_after = (en(b + h) - en(b)) / h;
  auto ratio = [](double x, double y) {
    const double lo = std::min(std::abs(x), std::abs(y)), hi = std::max(std::abs(x), std::abs(y));
    return lo > 0 ? hi / lo : INFINITY;
  };
  const double jump = std::max(ratio(s_before, s_across), ratio(s_across, s_after));

  // Continuity: refining the bracketing interval shrinks the largest step.
  SweepSpec fine = spec;
  fine.axes = {AxisRange{SweepAxis::LambdaGain, a, b, 5}};
  const auto fr = run_sweep(fine);
  double fine_step = 0.0;
  for (std::size_t i = 1; i < fr.rows.size(); ++i) {
    fine_step = std::max(fine_step, std::abs(*fr.rows[i].obs.en_max - *fr.rows[i - 1].obs.en_max));
  }
  const double coarse_step = std::abs(en(b) - en(a));
  const bool continuous = fine_step < 0.5 * coarse_step;
  return {jump > 5.0 && continuous,
          Detail()("slope_before", s_before)("slope_across", s_across)("slope_after", s_after)("ratio", jump)(
              "coarse_step", coarse_step)("refined_step", fine_step).str()};
}

struct OmegaScan {
  std::vector<double> omega, alpha, en;
  double step = 0.0;
  double g0 = 0.0;
  std::array<cdouble, 4> roots{};
};

OmegaScan omega_scan(const std::string& name) {
  const auto c = preset(name);
  const auto& r = sweep_of(name);
  OmegaScan s;
  s.step = c.sweep.axes[0].spacing();
  for (const auto& row : r.rows) {
    s.omega.push_back(row.axis_values[0]);
    s.alpha.push_back(row.obs.abs_alpha_max);
    s.en.push_back(row.obs.en_max.value_or(NAN));
  }
  const auto z = solve_zeroth_order(c.params);
  s.g0 = effective_coupling(c.params, z);
  s.roots = d_roots(c.params, z);
  return s;
}

Verdict twin_quantum_peaks() {
  bool ok = true;
  Detail d;
  double prev_sep = -INFINITY;
  for (const char* name : {"fig2d", "fig2e", "fig2f"}) {
    const auto s = omega_scan(name);
    const auto amax = local_maxima(s.alpha);
    auto classical_peak_near = [&](std::size_t i) {
      return std::any_of(amax.begin(), amax.end(), [&](std::size_t j) { return j + 1 >= i && j <= i + 1; });
    };
    std::optional<std::size_t> lo, hi;
    for (std::size_t i : local_maxima(s.en)) {
      if (std::abs(s.omega[i] - 2.0) > 0.6 || classical_peak_near(i)) continue;
      auto& slot = s.omega[i] < 2.0 ? lo : hi;
      if (!slot || s.en[i] > s.en[*slot]) slot = i;
    }
    d(std::string(name) + "_g0", s.g0);
    if (!lo || !hi) {
      ok = false;
      d(std::string(name) + "_peaks", lo ? "upper_missing" : (hi ? "lower_missing" : "both_missing"));
      if (lo) d(std::string(name) + "_lower", s.omega[*lo]);
      if (hi) d(std::string(name) + "_upper", s.omega[*hi]);
      continue;
    }
    const double wl = s.omega[*lo], wh = s.omega[*hi];
    d(std::string(name) + "_lower", wl)(std::string(name) + "_upper", wh);
    if (std::abs(wl - (2.0 - s.g0)) > 2 * s.step + 1e-12 || std::abs(wh - (2.0 + s.g0)) > 2 * s.step + 1e-12) ok = false;
    if (!(wh - wl > prev_sep)) ok = false;
    prev_sep = wh - wl;
  }
  return {ok, d.str()};
}

Verdict classical_splitting() {
  bool ok = true;
  Detail d;
  for (const char* name : {"fig2a", "fig2b", "fig2c"}) {
    const auto s = omega_scan(name);
    auto peaks = local_maxima(s.alpha);
    std::sort(peaks.begin(), peaks.end(), [&](auto a, auto b) { return s.alpha[a] > s.alpha[b]; });
    if (peaks.size() < 2) {
      ok = false;
      d(std::string(name) + "_peaks", peaks.size());
      continue;
    }
    double w1 = s.omega[peaks[0]], w2 = s.omega[peaks[1]];
    if (w1 > w2) std::swap(w1, w2);
    const double r1 = s.roots[2].real(), r2 = s.roots[3].real();
    const bool match = std::abs(w1 - r1) <= 2 * s.step + 1e-12 && std::abs(w2 - r2) <= 2 * s.step + 1e-12;
    ok = ok && match;
    d(std::string(name) + "_peaks", std::to_string(w1) + "/" + std::to_string(w2))(
        std::string(name) + "_roots", std::to_string(r1) + "/" + std::to_string(r2));
  }
  SystemParams p = preset("fig3").params;
  p.E = 1e3;
  const auto r = d_roots(p, solve_zeroth_order(p));
  const double dre = std::abs(r[3].real() - r[2].real()), dim = std::abs(r[3].imag() - r[2].imag());
  ok = ok && dre < 1e-3 && dim > 0.05;
  d("smallE_dRe", dre)("smallE_dIm", dim);
  return {ok, d.str()};
}

Verdict oracle_equivalences() {
  double lyap_err = 0.0;
  for (double E : {6e4, 8.6e4}) {
    SystemParams p = preset("fig1").params;
    p.E = E;
    p.lambda_gain = 0.0;
    IntegratorConfig cfg;
    cfg.record_from = 299 * p.modulation_period();
    const auto jt = integrate_joint(p, {}, CovarianceState::thermal(p.n_m), 300 * p.modulation_period(), cfg);
    const Matrix4 expect = oracle::algebraic_lyapunov(drift_matrix(0.0, jt.classical.states.back(), p).m, noise_matrix(p));
    lyap_err = std::max(lyap_err, (jt.covariances.back().v - expect).cwiseAbs().maxCoeff());
  }
  double tmsv_err = 0.0;
  for (double r : {0.1, 0.5, 1.0}) {
    tmsv_err = std::max(tmsv_err, std::abs(log_negativity(oracle::two_mode_squeezed(r)).e_n - 2 * r));
  }
  const double vac = log_negativity(CovarianceState::vacuum()).e_n;
  return {lyap_err < 1e-6 && tmsv_err < 1e-9 && vac == 0.0,
          Detail()("lyapunov_entrywise", lyap_err)("tmsv", tmsv_err)("vacuum_EN", vac).str()};
}

Verdict physicality_suite() {
  bool ok = true;
  Detail d;
  int checked = 0;
  double worst_asym = 0.0, worst_nu = INFINITY;
  for (const auto& info : list_presets()) {
    if (info.command != "simulate") continue;
    const auto c = preset(info.name);
    const double tau = c.params.modulation_period();
    IntegratorConfig cfg = c.integrator;
    cfg.record_from = c.simulate.record_from_periods * tau;
    const auto jt = integrate_joint(c.params, c.simulate.init, CovarianceState::thermal(c.params.n_m),
                                    c.simulate.resolved_t_end(c.params), cfg);
    if (jt.classical.divergent || !stability_check(c.params, jt.classical, kDefaultStabilitySamples).stable) {
      d(info.name, "unstable_skipped");
      continue;
    }
    ++checked;
    double asym = 0.0, nu = INFINITY;
    for (const auto& v : jt.covariances) {
      asym = std::max(asym, (v.v - v.v.transpose()).cwiseAbs().maxCoeff());
      nu = std::min(nu, min_symplectic_eigenvalue(v));
    }
    worst_asym = std::max(worst_asym, asym);
    worst_nu = std::min(worst_nu, nu);
    if (asym > 1e-12 || nu < 0.5 - 1e-9) {
      ok = false;
      d(info.name + "_asym", asym)(info.name + "_nu", nu);
    }
  }
  const SystemParams p = preset("fig1").params;
  const double tau = p.modulation_period();
  auto en_max = [&](const IntegratorConfig& base) {
    IntegratorConfig cfg = base;
    cfg.record_from = 299 * tau;
    return en_max_over_period(integrate_joint(p, {}, CovarianceState::thermal(p.n_m), 300 * tau, cfg).entanglement, tau);
  };
  IntegratorConfig half;
  half.rel_tol /= 2;
  half.abs_tol /= 2;
  const double change = std::abs(en_max(IntegratorConfig{}) - en_max(half));
  ok = ok && checked > 0 && change < 1e-5;
  d("presets_checked", checked)("max_asymmetry", worst_asym)("min_symplectic", worst_nu)("tol_halving_dEN", change);
  return {ok, d.str()};
}

Verdict thermal_robustness() {
  const auto c = preset("fig8");
  const auto tr = temperature_robustness(c.params, c.sweep.lambdas, c.sweep.axes.at(0), c.protocol(),
                                         c.sweep.mech_freq_hz);
  bool ok = true;
  Detail d;
  std::map<double, ThermalSummary> by_gain;
  for (const auto& s : tr.summaries) by_gain[s.lambda_gain] = s;
  for (double lambda : c.sweep.lambdas) {
    std::optional<double> prev;
    bool monotone = true;
    for (const auto& row : tr.rows) {
      if (row.lambda_gain != lambda) continue;
      const double v = row.en_max.value_or(NAN);
      if (!std::isfinite(v) || (prev && v > *prev + 1e-12)) monotone = false;
      prev = v;
    }
    const auto& s = by_gain.at(lambda);
    const std::string tag = "L" + format_number(lambda);
    d(tag + "_EN0", s.en_max_zero)(tag + "_Tv", s.vanishing_temperature.value_or(NAN))(tag + "_mu", s.mu.value_or(NAN))(
        tag + "_monotone", monotone);
    ok = ok && monotone && s.vanishing_temperature.has_value();
  }
  const auto& s4 = by_gain.at(0.04);
  const auto& s6 = by_gain.at(0.06);
  ok = ok && s6.en_max_zero > s4.en_max_zero && s4.en_max_zero > 0;
  ok = ok && s4.mu && s6.mu && *s6.mu > *s4.mu && *s4.mu > 0;
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"analytic/numeric agreement", analytic_agreement},
      {"critical gain", critical_gain},
      {"regime classification", regime_classification},
      {"lyapunov structure", lyapunov_structure},
      {"entanglement cusp", entanglement_cusp},
      {"twin quantum peaks", twin_quantum_peaks},
      {"classical splitting", classical_splitting},
      {"oracle equivalences", oracle_equivalences},
      {"physicality suite", physicality_suite},
      {"thermal robustness", thermal_robustness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("criterion %zu %s: %s (%.1f s) %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                seconds_since(t0), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
