#include "optomech/presets.hpp"


#include <utility>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

// Shared base: (E, g, gamma_m, kappa, Delta0) = (6e4, 4e-6, 1e-6, 0.2, 1),
// Lambda = 0.02, Omega = 1.16, theta = 0, zero temperature.
std::string params_block(const std::string& E, const std::string& lambda, const std::string& omega) {
  return "[params]\n"
         "omega_m = 1\n"
         "gamma_m = 1e-6\n"
         "kappa = 0.2\n"
         "delta0 = 1\n"
         "g = 4e-6\n"
         "E = " + E + "\n"
         "lambda_gain = " + lambda + "\n"
         "theta = 0\n"
         "omega_pump = " + omega + "\n"
         "n_m = 0\n";
}

std::string meta(const std::string& command, const std::string& provenance) {
  return "[meta]\ncommand = " + command + "\nprovenance = \"" + provenance + "\"\n\n";
}

std::string simulate(double t_end_periods, double record_from_periods) {
  return "\n[simulate]\nt_end_periods = " + std::to_string(static_cast<int>(t_end_periods)) +
         "\nrecord_from_periods = " + std::to_string(static_cast<int>(record_from_periods)) +
         "\nperturbation = true\n";
}

std::string omega_scan(const std::string& E, const std::string& provenance) {
  return meta("sweep", provenance) + params_block(E, "0.02", "1.16") +
         "\n[sweep]\nkind = grid\naxis1 = omega_pump\nstart1 = 0.5\nstop1 = 2.5\npoints1 = 81\n";
}

struct Preset {
  std::string command;
  std::string provenance;
  std::string text;
};

const std::vector<std::pair<std::string, Preset>>& registry() {
  static const std::vector<std::pair<std::string, Preset>> presets = [] {
    std::vector<std::pair<std::string, Preset>> v;
    auto add = [&](const std::string& name, const std::string& command, const std::string& prov,
                   const std::string& body) {
      v.push_back({name, {command, prov, meta(command, prov) + body}});
    };
    auto add_raw = [&](const std::string& name, const std::string& command, const std::string& prov,
                       const std::string& text) { v.push_back({name, {command, prov, text}}); };

    add("fig1", "simulate",
        "figure 1(b)(c): long-time |<a(t)>| and E_N at Lambda = 0.02, Omega = 1.16",
        params_block("6e4", "0.02", "1.16") + simulate(300, 290));

    const char* scans[][3] = {{"fig2a", "4e4", "figure 2(a): |<a(t)>|_max versus Omega, E = 4e4"},
                              {"fig2b", "6e4", "figure 2(b): |<a(t)>|_max versus Omega, E = 6e4"},
                              {"fig2c", "8e4", "figure 2(c): |<a(t)>|_max versus Omega, E = 8e4"},
                              {"fig2d", "4e4", "figure 2(d): E_N,max versus Omega, E = 4e4"},
                              {"fig2e", "6e4", "figure 2(e): E_N,max versus Omega, E = 6e4"},
                              {"fig2f", "8e4", "figure 2(f): E_N,max versus Omega, E = 8e4"}};
    for (const auto& s : scans) add_raw(s[0], "sweep", s[2], omega_scan(s[1], s[2]));

    add("fig3", "sweep", "figure 3: real and imaginary parts of the d(Omega) = 0 roots versus E",
        params_block("6e4", "0.02", "1.16") +
            "\n[sweep]\nkind = d_roots\naxis1 = E\nstart1 = 0\nstop1 = 1e5\npoints1 = 201\n");

    add("fig4", "sweep",
        "figure 4: E_N,max and |<a(t)>|_max over (Lambda, Omega) at E = 8.6e4, unstable points masked",
        params_block("8.6e4", "0", "1.16") +
            "\n[sweep]\nkind = grid\naxis1 = lambda_gain\nstart1 = 0\nstop1 = 0.05\npoints1 = 21\n"
            "axis2 = omega_pump\nstart2 = 0.3\nstop2 = 1.7\npoints2 = 57\n");

    add("fig5-periodic", "simulate", "figure 5(a): regular periodic q at Lambda = 0.03, E = 8.6e4",
        params_block("8.6e4", "0.03", "1.16") + simulate(300, 280));
    add("fig5-doubling", "simulate", "figure 5(b): period-doubled q at Lambda = 0.05, E = 8.6e4",
        params_block("8.6e4", "0.05", "1.16") + simulate(300, 280));

    add("fig6", "sweep",
        "figure 6: q extrema, Lyapunov exponent and E_N,max versus Lambda at E = 8.6e4, Omega = 1.16",
        params_block("8.6e4", "0.02", "1.16") +
            "\n[sweep]\nkind = grid\naxis1 = lambda_gain\nstart1 = 0.02\nstop1 = 0.06\npoints1 = 41\n"
            "refine_factor = 4\n");

    const char* gains[] = {"0.03", "0.043", "0.05"};
    const char* letters = "abcdef";
    for (int k = 0; k < 6; ++k) {
      const bool brief = k < 3;
      const std::string gain = gains[k % 3];
      const std::string name = std::string("fig7") + letters[k];
      const std::string prov = std::string("figure 7(") + letters[k] + "): " +
                               (brief ? "short-time" : "long-time") + " E_P at Lambda = " + gain +
                               ", E = 8.6e4";
      add(name, "simulate", prov,
          params_block("8.6e4", gain, "1.16") + (brief ? simulate(40, 0) : simulate(300, 290)));
    }

    add("fig8", "sweep",
        "figure 8: E_N,max versus temperature for Lambda = 0, 0.04, 0.06 at E = 8.6e4, Omega = 1.16",
        params_block("8.6e4", "0", "1.16") +
            "\n[sweep]\nkind = thermal\naxis1 = temperature\nstart1 = 0\nstop1 = 12\npoints1 = 25\n"
            "lambdas = 0, 0.04, 0.06\nmech_freq_hz = 1e6\n");
    return v;
  }();
  return presets;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& [name, p] : registry()) out.push_back({name, p.command, p.provenance});
  return out;
}

const std::string& preset_text(const std::string& name) {
  for (const auto& [n, p] : registry()) {
    if (n == name) return p.text;
  }
  std::string known;
  for (const auto& [n, p] : registry()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace optomech
