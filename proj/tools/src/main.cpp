#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "optomech/commands.hpp"
#include "optomech/errors.hpp"
#include "optomech/presets.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw optomech::ConfigError("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw optomech::ConfigError("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optomechanical cavity with an intracavity parametric amplifier"};
  app.require_subcommand(0, 1);

  bool list = false;
  app.add_flag("--list-presets", list, "Print shipped presets and exit");

  std::string preset, config_path, out_path, format, dump_path;
  unsigned threads = 0;
  long long seed = 0;

  struct Sub {
    optomech::Command cmd;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  const std::pair<optomech::Command, const char*> defs[] = {
      {optomech::Command::Simulate, "Integrate one trajectory (mean field, covariance, tangent vector)"},
      {optomech::Command::Sweep, "Scan a parameter grid, a temperature range or the d(Omega) roots"},
      {optomech::Command::Analytic, "First-order analytic steady state and d(Omega) roots"},
      {optomech::Command::Stability, "Drift-matrix stability at one point or over a grid"}};
  for (const auto& [cmd, help] : defs) {
    CLI::App* sub = app.add_subcommand(optomech::to_string(cmd), help);
    auto* p = sub->add_option("--preset", preset, "Named preset (see --list-presets)");
    auto* c = sub->add_option("--config", config_path, "Config file (key = value with [sections])");
    p->excludes(c);
    sub->add_option("--out", out_path, "Output file; metadata goes to <out>.meta.json (default: stdout)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "Worker threads for sweeps (0 = all cores)");
    sub->add_option("--seed", seed, "Accepted for uniformity and recorded; the model is deterministic");
    sub->add_option("--dump-config", dump_path, "Write the fully resolved config to this path ('-' for stdout) and exit");
    subs.push_back({cmd, sub});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  if (list) {
    for (const auto& p : optomech::list_presets()) {
      std::cout << p.name << "\t" << p.command << "\t" << p.provenance << "\n";
    }
    return 0;
  }

  const Sub* chosen = nullptr;
  for (const auto& s : subs) {
    if (s.app->parsed()) chosen = &s;
  }
  if (!chosen) {
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    optomech::RunConfig cfg;
    if (!preset.empty()) {
      cfg = optomech::parse_config("preset = " + preset + "\n", "--preset");
    } else if (!config_path.empty()) {
      cfg = optomech::load_config_file(config_path);
    } else {
      throw optomech::ConfigError("one of --preset or --config is required");
    }
    if (!format.empty()) cfg.format = optomech::format_from_string(format);

    if (!dump_path.empty()) {
      const std::string text = optomech::serialize_config(cfg);
      if (dump_path == "-") std::cout << text; else write_file(dump_path, text);
      return 0;
    }

    optomech::RunOptions opts;
    opts.threads = threads;
    if (chosen->app->count("--seed") > 0) opts.seed = seed;

    const optomech::RunOutput result = optomech::run_command(chosen->cmd, cfg, opts);
    if (out_path.empty() || out_path == "-") {
      std::cout << result.data;
    } else {
      write_file(out_path, result.data);
      write_file(out_path + ".meta.json", result.metadata);
    }
    return 0;
  } catch (const optomech::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const optomech::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
