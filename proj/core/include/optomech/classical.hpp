#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optomech/integrator.hpp"
#include "optomech/params.hpp"
#include "optomech/state.hpp"

namespace optomech {

/// Right-hand side of the mean-field equations of motion, including the
/// 2 Lambda cos(Omega t - theta) / 2 Lambda sin(Omega t - theta) OPA terms.
ClassicalState mean_field_rhs(double t, const ClassicalState& s, const SystemParams& params);

/// Linearized (tangent) dynamics of a perturbation `e` riding on trajectory `s`.
PerturbationState perturbation_rhs(double t, const ClassicalState& s, const PerturbationState& e,
                                   const SystemParams& params);

/// Dense samples of a classical integration.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<ClassicalState> states;
  std::optional<std::vector<PerturbationState>> eps;
  std::optional<std::vector<double>> eps_ic;
  bool divergent = false;
  IntegrationStats stats;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

enum class Periodicity { Period1, Period2, Aperiodic, Divergent };

std::string to_string(Periodicity p);
Periodicity periodicity_from_string(const std::string& s);

struct PeriodicityClass {
  Periodicity tag = Periodicity::Aperiodic;
  double residual = 0.0;           // residual of the accepted class (or the tau residual)
  double residual_tau = 0.0;       // normalized sup |q(t+tau) - q(t)|
  double residual_two_tau = 0.0;   // normalized sup |q(t+2tau) - q(t)|
};

inline constexpr double kDefaultPeriodicityTol = 1e-3;
inline constexpr double kExtremaMergeFraction = 1e-3;
/// Lower bound on the periodicity normalization, relative to max |q|.
inline constexpr double kAmplitudeFloor = 1e-6;

/// Integrates the mean-field equations from `init` up to `t_end`, sampling
/// `cfg.dense_samples_per_tau` points per modulation period. When `init_eps` is
/// given the tangent dynamics are co-integrated on the same steps (they do not
/// take part in step-size control) and eps_Ic is recorded.
TrajectoryRecord integrate_classical(const SystemParams& params, const ClassicalState& init,
                                     const std::optional<PerturbationState>& init_eps,
                                     double t_end, const IntegratorConfig& cfg = {});

/// Cubic Hermite interpolation of the recorded state at time t, using the
/// mean-field right-hand side as derivative data.
ClassicalState interpolate_state(const TrajectoryRecord& traj, const SystemParams& params, double t);

/// Stroboscopic comparison of q over the last `window` periods (plus two
/// periods of look-ahead). Residuals are normalized by the peak-to-peak range of
/// q, floored at kAmplitudeFloor * max |q|.
PeriodicityClass classify_periodicity(const TrajectoryRecord& traj, double tau, int window,
                                      double tol = kDefaultPeriodicityTol);

/// Same classification restricted to [t_start, t_start + window * tau] (with
/// two periods of look-ahead past the end).
PeriodicityClass classify_periodicity_at(const TrajectoryRecord& traj, double tau, double t_start,
                                         int window, double tol = kDefaultPeriodicityTol);

struct ExtremeValues {
  std::vector<double> maxima;  // cluster centres, ascending
  std::vector<double> minima;  // cluster centres, ascending

  /// Minima then maxima, ascending overall.
  std::vector<double> all() const;
};

/// Local extrema of q over the last `window` periods, found at sign changes of
/// p and refined by a parabola through the neighbouring samples, then merged
/// into clusters closer than merge_fraction * (max q - min q).
ExtremeValues steady_extreme_values(const TrajectoryRecord& traj, double tau, int window,
                                    double merge_fraction = kExtremaMergeFraction);

/// Least-squares slope of ln eps_Ic(t) over [fit_start, fit_end]. Throws
/// NumericalError naming the first sample where eps_Ic <= 0.
double lyapunov_exponent(const TrajectoryRecord& traj, double fit_start, double fit_end);

/// Slope of ln max|eps_Ic| taken over consecutive blocks of two modulation
/// periods in [fit_start, fit_end]. Defined when eps_Ic changes sign, which it
/// does whenever the perturbation rides on a large coherent amplitude.
double lyapunov_exponent_envelope(const TrajectoryRecord& traj, double fit_start, double fit_end,
                                  double tau);

/// Maximum of |alpha| over the final period [t_end - tau, t_end].
double period_max_amplitude(const TrajectoryRecord& traj, double tau);

/// Default Lyapunov fit window [280 tau, 300 tau].
inline constexpr int kSettlePeriods = 280;
inline constexpr int kMeasurePeriods = 20;

}  // namespace optomech
