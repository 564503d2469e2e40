#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "optomech/analytic.hpp"
#include "optomech/classical.hpp"
#include "optomech/params.hpp"
#include "optomech/quantum.hpp"

namespace optomech {

enum class SweepAxis { OmegaPump, LambdaGain, DriveE, Temperature };

/// Column / config name of an axis: omega_pump, lambda_gain, E, temperature.
std::string axis_name(SweepAxis axis);
SweepAxis axis_from_name(const std::string& name);

struct AxisRange {
  SweepAxis axis = SweepAxis::LambdaGain;
  double start = 0.0;
  double stop = 0.0;
  int points = 2;

  void validate() const;
  /// Evenly spaced grid; endpoints are exact.
  std::vector<double> values() const;
  double spacing() const { return (stop - start) / (points - 1); }
};

/// Per-point measurement protocol: integrate (settle + measure) periods and
/// evaluate every observable over the measure window.
struct PointProtocol {
  int settle_periods = kSettlePeriods;
  int measure_periods = kMeasurePeriods;
  IntegratorConfig integrator{};
  ClassicalState init{};
  /// Initial covariance; empty selects the thermal state for the point's n_m.
  std::optional<CovarianceState> init_cov;
  PerturbationState eps0 = kDefaultPerturbation;
  double periodicity_tol = kDefaultPeriodicityTol;
  int stability_samples = kDefaultStabilitySamples;
  bool quantum = true;  // false skips the covariance (stability-only scans)

  void validate() const;
};

struct PointObservables {
  double abs_alpha_max = 0.0;
  std::optional<double> en_max;     // undefined for unstable / divergent points
  ExtremeValues q_em;
  PeriodicityClass periodicity;
  std::optional<double> lyapunov;
  StabilityReport stability;
  std::string status = "ok";        // ok | unstable | divergent | failed
  std::string diagnostics;
};

/// Runs one parameter point through the protocol. Never throws for
/// numerical trouble; failures are reported in `status`/`diagnostics`.
PointObservables simulate_point(const SystemParams& params, const PointProtocol& protocol);

struct SweepSpec {
  SystemParams base{};
  std::vector<AxisRange> axes;  // one or two
  PointProtocol protocol{};
  double mech_freq_hz = 1e6;    // converts a temperature axis to n_m

  void validate() const;
};

struct SweepRow {
  std::vector<double> axis_values;
  SystemParams params;
  PointObservables obs;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<SweepRow> rows;  // row-major over the axes (first axis slowest)
};

/// Resolves a grid point to concrete parameters.
SystemParams apply_axis(SystemParams p, SweepAxis axis, double value, double mech_freq_hz);

/// Evaluates every grid point, `threads` at a time (0 = hardware concurrency).
/// Row order and contents do not depend on the thread count.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);

/// Calls f(i) for i in [0, n) on a bounded pool of worker threads.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f);

struct CriticalGain {
  double lambda_c = 0.0;
  double uncertainty = 0.0;      // grid spacing around the transition
  double last_period1 = 0.0;
  double first_period2 = 0.0;
  std::optional<double> lyapunov_peak;  // lambda where the exponent is closest to zero
};

/// Lambda_c as the midpoint between the last Period1 point preceding the first
/// Period2 point. Throws NumericalError when no such transition exists.
CriticalGain detect_critical_gain(const SweepResult& result);

/// Re-scans [last_period1, first_period2] with `factor` times finer spacing.
CriticalGain refine_critical_gain(const SweepSpec& spec, const CriticalGain& coarse, int factor = 4,
                                  unsigned threads = 0);

struct ThermalRow {
  double lambda_gain = 0.0;
  double temperature = 0.0;
  double n_m = 0.0;
  std::optional<double> en_max;
  std::optional<double> renormalized;  // E_N,max(T) / E_N,max(0)
};

struct ThermalSummary {
  double lambda_gain = 0.0;
  double en_max_zero = 0.0;
  std::optional<double> vanishing_temperature;  // kelvin
  std::optional<double> mu;                     // E_N,max(0) / T_vanish, 1/K
  std::string flag;                             // empty when mu is defined
};

struct ThermalRobustness {
  std::vector<ThermalRow> rows;
  std::vector<ThermalSummary> summaries;
};

inline constexpr double kVanishingEntanglement = 1e-6;

/// E_N,max over a temperature grid for each gain, plus the temperature where
/// it vanishes (bisection between the bracketing grid points) and mu.
ThermalRobustness temperature_robustness(const SystemParams& base, const std::vector<double>& lambdas,
                                         const AxisRange& temperatures,
                                         const PointProtocol& protocol, double mech_freq_hz = 1e6,
                                         unsigned threads = 0);

struct RootScanRow {
  double E = 0.0;
  std::array<cdouble, 4> roots{};
};

/// d(Omega) roots over a drive-strength axis (the axis must be E).
std::vector<RootScanRow> scan_d_roots(const SystemParams& base, const AxisRange& drive);

}  // namespace optomech
