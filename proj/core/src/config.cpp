#include "optomech/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "optomech/errors.hpp"
#include "optomech/presets.hpp"

namespace optomech {

std::string to_string(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Sweep: return "sweep";
    case Command::Analytic: return "analytic";
    case Command::Stability: return "stability";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::Simulate, Command::Sweep, Command::Analytic, Command::Stability}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown command '" + s + "'");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

std::string to_string(SweepKind k) {
  switch (k) {
    case SweepKind::Grid: return "grid";
    case SweepKind::Thermal: return "thermal";
    case SweepKind::DRoots: return "d_roots";
  }
  return "?";
}

SweepKind sweep_kind_from_string(const std::string& s) {
  for (SweepKind k : {SweepKind::Grid, SweepKind::Thermal, SweepKind::DRoots}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown sweep kind '" + s + "' (expected grid, thermal or d_roots)");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, r.ptr};
}

double SimulateOptions::resolved_t_end(const SystemParams& p) const {
  if (t_end && t_end_periods) throw ConfigError("[simulate] t_end and t_end_periods are mutually exclusive");
  if (!t_end && !t_end_periods) throw ConfigError("[simulate] needs t_end or t_end_periods");
  const double v = t_end ? *t_end : *t_end_periods * p.modulation_period();
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("[simulate] end time must be > 0");
  return v;
}

void RunConfig::validate(Command cmd) const {
  // Analytic and stability reports apply to any parameter set.
  if (command && *command != cmd && (cmd == Command::Simulate || cmd == Command::Sweep)) {
    throw ConfigError("configuration is for the '" + to_string(*command) + "' command, not '" +
                      to_string(cmd) + "'");
  }
  params.validate();
  integrator.validate();
  switch (cmd) {
    case Command::Simulate: {
      const double t_end = simulate.resolved_t_end(params);
      if (simulate.record_from_periods < 0.0) throw ConfigError("[simulate] record_from_periods must be >= 0");
      if (simulate.record_from_periods * params.modulation_period() >= t_end) {
        throw ConfigError("[simulate] record_from_periods is past the end time");
      }
      break;
    }
    case Command::Sweep:
      if (sweep.kind == SweepKind::DRoots) {
        if (sweep.axes.size() != 1 || sweep.axes[0].axis != SweepAxis::DriveE) {
          throw ConfigError("[sweep] kind = d_roots needs exactly one axis, E");
        }
        sweep.axes[0].validate();
      } else if (sweep.kind == SweepKind::Thermal) {
        if (sweep.axes.size() != 1 || sweep.axes[0].axis != SweepAxis::Temperature) {
          throw ConfigError("[sweep] kind = thermal needs exactly one axis, temperature");
        }
        if (sweep.lambdas.empty()) throw ConfigError("[sweep] kind = thermal needs lambdas");
        sweep.axes[0].validate();
        protocol().validate();
      } else {
        sweep_spec().validate();
      }
      if (sweep.refine_factor == 1 || sweep.refine_factor < 0) {
        throw ConfigError("[sweep] refine_factor must be 0 or >= 2");
      }
      break;
    case Command::Stability:
      protocol().validate();
      if (!sweep.axes.empty()) sweep_spec().validate();
      break;
    case Command::Analytic: break;
  }
}

PointProtocol RunConfig::protocol() const {
  PointProtocol pp;
  pp.settle_periods = sweep.settle_periods;
  pp.measure_periods = sweep.measure_periods;
  pp.integrator = integrator;
  pp.periodicity_tol = sweep.periodicity_tol;
  pp.stability_samples = sweep.stability_samples;
  pp.init = simulate.init;
  pp.eps0 = simulate.eps0;
  if (!simulate.thermal_init) pp.init_cov = CovarianceState::vacuum();
  return pp;
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.base = params;
  s.axes = sweep.axes;
  s.protocol = protocol();
  s.mech_freq_hz = sweep.mech_freq_hz;
  return s;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

struct Document {
  std::map<std::string, Section> sections;  // "" holds top-level keys
  std::map<std::string, int> section_lines;
};

Document tokenize(const std::string& text, const std::string& source) {
  Document doc;
  std::istringstream in(text);
  std::string raw, current;
  int line_no = 0;
  doc.sections[""];
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw ConfigError(where + "empty section name");
      if (doc.section_lines.count(current)) throw ConfigError(where + "duplicate section [" + current + "]");
      doc.section_lines[current] = line_no;
      doc.sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    auto& sec = doc.sections[current];
    if (sec.count(key)) {
      throw ConfigError(where + "[" + current + "] duplicate key '" + key + "' (first set on line " +
                        std::to_string(sec[key].line) + ")");
    }
    sec[key] = {value, line_no};
  }
  return doc;
}

class Reader {
 public:
  Reader(const Document& doc, std::string source) : doc_(doc), source_(std::move(source)) {}

  std::string where(const std::string& sec, const std::string& key) const {
    const Entry& e = doc_.sections.at(sec).at(key);
    return source_ + ":" + std::to_string(e.line) + ": [" + sec + "] " + key + ": ";
  }

  const std::string& raw(const std::string& sec, const std::string& key) const {
    return doc_.sections.at(sec).at(key).value;
  }

  double number(const std::string& sec, const std::string& key) const {
    const std::string& v = raw(sec, key);
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size() || !std::isfinite(out)) {
      throw ConfigError(where(sec, key) + "'" + v + "' is not a finite number");
    }
    return out;
  }

  int integer(const std::string& sec, const std::string& key) const {
    const std::string& v = raw(sec, key);
    int out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) {
      throw ConfigError(where(sec, key) + "'" + v + "' is not an integer");
    }
    return out;
  }

  bool boolean(const std::string& sec, const std::string& key) const {
    const std::string& v = raw(sec, key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(where(sec, key) + "'" + v + "' is not a boolean");
  }

  std::vector<double> list(const std::string& sec, const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(raw(sec, key));
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      double x = 0.0;
      const auto r = std::from_chars(item.data(), item.data() + item.size(), x);
      if (item.empty() || r.ec != std::errc{} || r.ptr != item.data() + item.size() || !std::isfinite(x)) {
        throw ConfigError(where(sec, key) + "'" + item + "' is not a finite number");
      }
      out.push_back(x);
    }
    if (out.empty()) throw ConfigError(where(sec, key) + "empty list");
    return out;
  }

  template <class F>
  void guarded(const std::string& sec, const std::string& key, F&& f) const {
    try {
      f();
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      if (msg.rfind(source_, 0) == 0) throw;
      throw ConfigError(where(sec, key) + msg);
    }
  }

 private:
  const Document& doc_;
  std::string source_;
};

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = [] {
    std::map<std::string, std::set<std::string>> k;
    k[""] = {"preset"};
    k["meta"] = {"command", "provenance", "origin"};
    k["params"] = {system_param_keys().begin(), system_param_keys().end()};
    k["integrator"] = {"rel_tol", "abs_tol", "max_step", "initial_step", "dense_samples_per_tau"};
    k["simulate"] = {"t_end", "t_end_periods", "record_from_periods", "perturbation", "eps_q",
                     "eps_p", "eps_ar", "eps_ai", "q", "p", "alpha_r", "alpha_i",
                     "initial_covariance"};
    k["sweep"] = {"kind", "axis1", "start1", "stop1", "points1", "axis2", "start2", "stop2",
                  "points2", "lambdas", "settle_periods", "measure_periods", "periodicity_tol",
                  "stability_samples", "mech_freq_hz", "refine_factor"};
    k["output"] = {"format"};
    return k;
  }();
  return keys;
}

void apply(const Document& doc, const Reader& rd, RunConfig& c, const std::string& source) {
  for (const auto& [name, sec] : doc.sections) {
    const auto it = allowed_keys().find(name);
    if (it == allowed_keys().end()) {
      throw ConfigError(source + ":" + std::to_string(doc.section_lines.at(name)) +
                        ": unknown section [" + name + "]");
    }
    for (const auto& [key, entry] : sec) {
      if (!it->second.count(key)) throw ConfigError(rd.where(name, key) + "unknown key");
    }
  }
  auto has = [&](const std::string& sec, const std::string& key) {
    const auto it = doc.sections.find(sec);
    return it != doc.sections.end() && it->second.count(key) > 0;
  };

  if (has("meta", "command")) {
    rd.guarded("meta", "command", [&] { c.command = command_from_string(rd.raw("meta", "command")); });
  }
  if (has("meta", "provenance")) c.provenance = rd.raw("meta", "provenance");
  if (has("meta", "origin") && !c.preset) c.preset = rd.raw("meta", "origin");

  if (const auto it = doc.sections.find("params"); it != doc.sections.end()) {
    for (const auto& [key, entry] : it->second) set_param(c.params, key, rd.number("params", key));
  }

  auto num = [&](const std::string& sec, const std::string& key, double& dst) {
    if (has(sec, key)) dst = rd.number(sec, key);
  };
  auto integer = [&](const std::string& sec, const std::string& key, int& dst) {
    if (has(sec, key)) dst = rd.integer(sec, key);
  };

  num("integrator", "rel_tol", c.integrator.rel_tol);
  num("integrator", "abs_tol", c.integrator.abs_tol);
  num("integrator", "max_step", c.integrator.max_step);
  num("integrator", "initial_step", c.integrator.initial_step);
  integer("integrator", "dense_samples_per_tau", c.integrator.dense_samples_per_tau);

  auto& s = c.simulate;
  if (has("simulate", "t_end")) {
    s.t_end = rd.number("simulate", "t_end");
    s.t_end_periods.reset();
  }
  if (has("simulate", "t_end_periods")) {
    s.t_end_periods = rd.number("simulate", "t_end_periods");
    if (!has("simulate", "t_end")) s.t_end.reset();
  }
  num("simulate", "record_from_periods", s.record_from_periods);
  if (has("simulate", "perturbation")) s.perturbation = rd.boolean("simulate", "perturbation");
  num("simulate", "eps_q", s.eps0.eps_q);
  num("simulate", "eps_p", s.eps0.eps_p);
  num("simulate", "eps_ar", s.eps0.eps_ar);
  num("simulate", "eps_ai", s.eps0.eps_ai);
  num("simulate", "q", s.init.q);
  num("simulate", "p", s.init.p);
  num("simulate", "alpha_r", s.init.alpha_r);
  num("simulate", "alpha_i", s.init.alpha_i);
  if (has("simulate", "initial_covariance")) {
    const std::string& v = rd.raw("simulate", "initial_covariance");
    if (v == "thermal") s.thermal_init = true;
    else if (v == "vacuum") s.thermal_init = false;
    else throw ConfigError(rd.where("simulate", "initial_covariance") + "expected thermal or vacuum");
  }

  auto& w = c.sweep;
  if (has("sweep", "kind")) {
    rd.guarded("sweep", "kind", [&] { w.kind = sweep_kind_from_string(rd.raw("sweep", "kind")); });
  }
  for (int k = 1; k <= 2; ++k) {
    const std::string n = std::to_string(k);
    const bool any = has("sweep", "axis" + n) || has("sweep", "start" + n) ||
                     has("sweep", "stop" + n) || has("sweep", "points" + n);
    if (!any) continue;
    // A preset's axis may be overridden field by field; a new axis needs all four.
    const bool existing = static_cast<int>(w.axes.size()) >= k;
    if (!existing) {
      for (const char* f : {"axis", "start", "stop", "points"}) {
        if (!has("sweep", f + n)) {
          throw ConfigError(source + ": [sweep] axis " + n + " is missing '" + f + n + "'");
        }
      }
    }
    if (k == 2 && w.axes.empty() && !has("sweep", "axis1")) {
      throw ConfigError(rd.where("sweep", "axis2") + "axis2 given without axis1");
    }
    AxisRange a = existing ? w.axes[k - 1] : AxisRange{};
    if (has("sweep", "axis" + n)) {
      rd.guarded("sweep", "axis" + n, [&] { a.axis = axis_from_name(rd.raw("sweep", "axis" + n)); });
    }
    if (has("sweep", "start" + n)) a.start = rd.number("sweep", "start" + n);
    if (has("sweep", "stop" + n)) a.stop = rd.number("sweep", "stop" + n);
    if (has("sweep", "points" + n)) a.points = rd.integer("sweep", "points" + n);
    const std::string last = has("sweep", "points" + n) ? "points" + n
                             : has("sweep", "stop" + n) ? "stop" + n
                             : has("sweep", "start" + n) ? "start" + n : "axis" + n;
    rd.guarded("sweep", last, [&] { a.validate(); });
    if (static_cast<int>(w.axes.size()) >= k) w.axes[k - 1] = a; else w.axes.push_back(a);
  }
  if (has("sweep", "lambdas")) w.lambdas = rd.list("sweep", "lambdas");
  integer("sweep", "settle_periods", w.settle_periods);
  integer("sweep", "measure_periods", w.measure_periods);
  num("sweep", "periodicity_tol", w.periodicity_tol);
  integer("sweep", "stability_samples", w.stability_samples);
  num("sweep", "mech_freq_hz", w.mech_freq_hz);
  integer("sweep", "refine_factor", w.refine_factor);

  if (has("output", "format")) {
    rd.guarded("output", "format", [&] { c.format = format_from_string(rd.raw("output", "format")); });
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  const Document doc = tokenize(text, source);
  const Reader rd(doc, source);
  RunConfig c;
  const auto& top = doc.sections.at("");
  if (const auto it = top.find("preset"); it != top.end()) {
    if (doc.sections.count("params")) {
      throw ConfigError(source + ":" + std::to_string(doc.section_lines.at("params")) +
                        ": [params] cannot be combined with preset '" + it->second.value + "'");
    }
    rd.guarded("", "preset", [&] {
      c = parse_config(preset_text(it->second.value), "preset " + it->second.value);
    });
    c.preset = it->second.value;
  }
  apply(doc, rd, c, source);
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[meta]\n";
  if (c.command) o << "command = " << to_string(*c.command) << "\n";
  if (c.preset) o << "origin = " << *c.preset << "\n";
  if (!c.provenance.empty()) o << "provenance = \"" << c.provenance << "\"\n";
  o << "\n[params]\n";
  for (const auto& [k, v] : to_key_values(c.params)) o << k << " = " << format_number(v) << "\n";
  const auto& i = c.integrator;
  o << "\n[integrator]\n"
    << "rel_tol = " << format_number(i.rel_tol) << "\n"
    << "abs_tol = " << format_number(i.abs_tol) << "\n"
    << "max_step = " << format_number(i.max_step) << "\n"
    << "initial_step = " << format_number(i.initial_step) << "\n"
    << "dense_samples_per_tau = " << i.dense_samples_per_tau << "\n";
  const auto& s = c.simulate;
  o << "\n[simulate]\n";
  if (s.t_end) o << "t_end = " << format_number(*s.t_end) << "\n";
  if (s.t_end_periods) o << "t_end_periods = " << format_number(*s.t_end_periods) << "\n";
  o << "record_from_periods = " << format_number(s.record_from_periods) << "\n"
    << "perturbation = " << (s.perturbation ? "true" : "false") << "\n"
    << "eps_q = " << format_number(s.eps0.eps_q) << "\n"
    << "eps_p = " << format_number(s.eps0.eps_p) << "\n"
    << "eps_ar = " << format_number(s.eps0.eps_ar) << "\n"
    << "eps_ai = " << format_number(s.eps0.eps_ai) << "\n"
    << "q = " << format_number(s.init.q) << "\n"
    << "p = " << format_number(s.init.p) << "\n"
    << "alpha_r = " << format_number(s.init.alpha_r) << "\n"
    << "alpha_i = " << format_number(s.init.alpha_i) << "\n"
    << "initial_covariance = " << (s.thermal_init ? "thermal" : "vacuum") << "\n";
  const auto& w = c.sweep;
  o << "\n[sweep]\n"
    << "kind = " << to_string(w.kind) << "\n";
  for (std::size_t k = 0; k < w.axes.size(); ++k) {
    const std::string n = std::to_string(k + 1);
    o << "axis" << n << " = " << axis_name(w.axes[k].axis) << "\n"
      << "start" << n << " = " << format_number(w.axes[k].start) << "\n"
      << "stop" << n << " = " << format_number(w.axes[k].stop) << "\n"
      << "points" << n << " = " << w.axes[k].points << "\n";
  }
  if (!w.lambdas.empty()) {
    o << "lambdas = ";
    for (std::size_t k = 0; k < w.lambdas.size(); ++k) {
      o << (k ? ", " : "") << format_number(w.lambdas[k]);
    }
    o << "\n";
  }
  o << "settle_periods = " << w.settle_periods << "\n"
    << "measure_periods = " << w.measure_periods << "\n"
    << "periodicity_tol = " << format_number(w.periodicity_tol) << "\n"
    << "stability_samples = " << w.stability_samples << "\n"
    << "mech_freq_hz = " << format_number(w.mech_freq_hz) << "\n"
    << "refine_factor = " << w.refine_factor << "\n";
  o << "\n[output]\nformat = " << to_string(c.format) << "\n";
  return o.str();
}

}  // namespace optomech
