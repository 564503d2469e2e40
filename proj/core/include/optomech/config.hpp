#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optomech/integrator.hpp"
#include "optomech/params.hpp"
#include "optomech/state.hpp"
#include "optomech/sweep.hpp"

namespace optomech {

enum class Command { Simulate, Sweep, Analytic, Stability };
enum class OutputFormat { Csv, Json };
enum class SweepKind { Grid, Thermal, DRoots };

std::string to_string(Command c);
Command command_from_string(const std::string& s);
std::string to_string(OutputFormat f);
OutputFormat format_from_string(const std::string& s);
std::string to_string(SweepKind k);
SweepKind sweep_kind_from_string(const std::string& s);

struct SimulateOptions {
  std::optional<double> t_end;          // 1/omega_m
  std::optional<double> t_end_periods;  // multiples of tau
  double record_from_periods = 0.0;
  bool perturbation = true;
  PerturbationState eps0 = kDefaultPerturbation;
  ClassicalState init{};
  bool thermal_init = true;  // false starts from the vacuum covariance

  /// End time in 1/omega_m. Throws ConfigError unless exactly one of
  /// t_end / t_end_periods is set and positive.
  double resolved_t_end(const SystemParams& p) const;
};

struct SweepOptions {
  SweepKind kind = SweepKind::Grid;
  std::vector<AxisRange> axes;
  std::vector<double> lambdas;  // thermal scans
  int settle_periods = kSettlePeriods;
  int measure_periods = kMeasurePeriods;
  double periodicity_tol = kDefaultPeriodicityTol;
  int stability_samples = kDefaultStabilitySamples;
  double mech_freq_hz = 1e6;
  int refine_factor = 0;  // > 1 refines the critical gain of a lambda_gain scan
};

/// Everything needed to reproduce one run.
struct RunConfig {
  std::optional<std::string> preset;  // name the config was derived from
  std::optional<Command> command;     // the command the config is meant for
  std::string provenance;
  SystemParams params{};
  IntegratorConfig integrator{};
  SimulateOptions simulate{};
  SweepOptions sweep{};
  OutputFormat format = OutputFormat::Csv;

  void validate(Command cmd) const;
  SweepSpec sweep_spec() const;
  PointProtocol protocol() const;
};

/// Parses "key = value" text with [sections] and '#' or ';' comments.
///
/// A top-level `preset = name` loads that preset first; the remaining keys
/// are applied on top. A preset and a [params] section are mutually exclusive.
/// Errors carry "<source>:<line>: [section] key" diagnostics.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config_file(const std::string& path);

/// Fully resolved text form: every key written explicitly, no preset
/// reference. parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& c);

/// 17 significant digits, enough to read back the same double.
std::string format_number(double v);

}  // namespace optomech
