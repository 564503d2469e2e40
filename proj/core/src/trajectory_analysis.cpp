#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "optomech/classical.hpp"
#include "optomech/errors.hpp"
#include "optomech/series.hpp"

namespace optomech {

std::string to_string(Periodicity p) {
  switch (p) {
    case Periodicity::Period1: return "Period1";
    case Periodicity::Period2: return "Period2";
    case Periodicity::Aperiodic: return "Aperiodic";
    case Periodicity::Divergent: return "Divergent";
  }
  return "Aperiodic";
}

Periodicity periodicity_from_string(const std::string& s) {
  for (auto p : {Periodicity::Period1, Periodicity::Period2, Periodicity::Aperiodic,
                 Periodicity::Divergent}) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError("unknown periodicity tag '" + s + "'");
}

namespace {

// q(t) by cubic Hermite interpolation with dq/dt = omega_m p (omega_m == 1).
double q_at(const TrajectoryRecord& traj, double t) {
  const auto& ts = traj.times;
  if (t <= ts.front()) return traj.states.front().q;
  if (t >= ts.back()) return traj.states.back().q;
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i1 = static_cast<std::size_t>(it - ts.begin());
  const std::size_t i0 = i1 - 1;
  const double h = ts[i1] - ts[i0];
  const double s = (t - ts[i0]) / h;
  const auto& a = traj.states[i0];
  const auto& b = traj.states[i1];
  return (1 + 2 * s) * (1 - s) * (1 - s) * a.q + s * (1 - s) * (1 - s) * h * a.p +
         s * s * (3 - 2 * s) * b.q + s * s * (s - 1) * h * b.p;
}

void require_span(const TrajectoryRecord& traj, double t_from, double t_to, const char* what) {
  if (traj.empty()) throw ConfigError(std::string(what) + ": empty trajectory");
  const double slack = 1e-9 * std::max(1.0, std::abs(t_to));
  if (traj.times.front() > t_from + slack || traj.times.back() < t_to - slack) {
    std::ostringstream os;
    os << what << ": trajectory covers [" << traj.times.front() << ", " << traj.times.back()
       << "] but [" << t_from << ", " << t_to << "] is required";
    throw ConfigError(os.str());
  }
}

std::vector<double> cluster(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<double> centres;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values[i] - values[i - 1] > tol) {
      double sum = 0.0;
      for (std::size_t k = start; k < i; ++k) sum += values[k];
      if (i > start) centres.push_back(sum / static_cast<double>(i - start));
      start = i;
    }
  }
  return centres;
}

}  // namespace

PeriodicityClass classify_periodicity_at(const TrajectoryRecord& traj, double tau, double t_start,
                                         int window, double tol) {
  if (!(tau > 0.0)) throw ConfigError("classify_periodicity: tau must be > 0");
  if (window < 1) throw ConfigError("classify_periodicity: window must be >= 1 period");
  PeriodicityClass out;
  if (traj.divergent) {
    out.tag = Periodicity::Divergent;
    out.residual = std::numeric_limits<double>::infinity();
    out.residual_tau = out.residual_two_tau = out.residual;
    return out;
  }
  const double t_stop = t_start + window * tau;
  require_span(traj, t_start, t_stop + 2.0 * tau, "classify_periodicity");

  const auto [first, last] = window_indices(traj.times, t_start, t_stop + 2.0 * tau);
  double qmin = std::numeric_limits<double>::infinity();
  double qmax = -qmin;
  double qabs = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    qmin = std::min(qmin, traj.states[i].q);
    qmax = std::max(qmax, traj.states[i].q);
    qabs = std::max(qabs, std::abs(traj.states[i].q));
  }
  // A fixed point has no range to speak of; measure it against the offset.
  const double range = std::max(qmax - qmin, kAmplitudeFloor * qabs);

  double r1 = 0.0, r2 = 0.0;
  const auto [wf, wl] = window_indices(traj.times, t_start, t_stop);
  for (std::size_t i = wf; i < wl; ++i) {
    const double t = traj.times[i];
    const double q0 = traj.states[i].q;
    r1 = std::max(r1, std::abs(q_at(traj, t + tau) - q0));
    r2 = std::max(r2, std::abs(q_at(traj, t + 2.0 * tau) - q0));
  }
  if (range > 0.0) {
    r1 /= range;
    r2 /= range;
  } else {
    r1 = r2 = 0.0;
  }
  out.residual_tau = r1;
  out.residual_two_tau = r2;
  if (r1 < tol) {
    out.tag = Periodicity::Period1;
    out.residual = r1;
  } else if (r2 < tol) {
    out.tag = Periodicity::Period2;
    out.residual = r2;
  } else {
    out.tag = Periodicity::Aperiodic;
    out.residual = std::min(r1, r2);
  }
  return out;
}

PeriodicityClass classify_periodicity(const TrajectoryRecord& traj, double tau, int window,
                                      double tol) {
  if (traj.divergent) return classify_periodicity_at(traj, tau, 0.0, std::max(window, 1), tol);
  if (traj.empty()) throw ConfigError("classify_periodicity: empty trajectory");
  const double t_start = traj.times.back() - (window + 2) * tau;
  return classify_periodicity_at(traj, tau, t_start, window, tol);
}

std::vector<double> ExtremeValues::all() const {
  std::vector<double> v = minima;
  v.insert(v.end(), maxima.begin(), maxima.end());
  std::sort(v.begin(), v.end());
  return v;
}

ExtremeValues steady_extreme_values(const TrajectoryRecord& traj, double tau, int window,
                                    double merge_fraction) {
  if (!(tau > 0.0) || window < 1) throw ConfigError("steady_extreme_values: bad window");
  if (traj.empty()) throw ConfigError("steady_extreme_values: empty trajectory");
  const double t_to = traj.times.back();
  const double t_from = t_to - window * tau;
  require_span(traj, t_from, t_to, "steady_extreme_values");
  const auto [first, last] = window_indices(traj.times, t_from, t_to);

  std::vector<double> maxima, minima;
  double qmin = std::numeric_limits<double>::infinity();
  double qmax = -qmin;
  const auto& ts = traj.times;
  const auto& st = traj.states;
  for (std::size_t i = first; i < last; ++i) {
    qmin = std::min(qmin, st[i].q);
    qmax = std::max(qmax, st[i].q);
  }
  for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < last; ++i) {
    const double pa = st[i].p;
    const double pb = st[i + 1].p;
    const bool falling = pa > 0.0 && pb <= 0.0;
    const bool rising = pa < 0.0 && pb >= 0.0;
    if (!falling && !rising) continue;
    // Centre the parabola on whichever sample is closer to the p root.
    const std::size_t c = std::abs(pa) <= std::abs(pb) ? i : i + 1;
    if (c == 0 || c + 1 >= ts.size()) continue;
    const double sign = falling ? 1.0 : -1.0;
    const auto [tv, yv] = parabola_vertex(ts[c - 1], sign * st[c - 1].q, ts[c], sign * st[c].q,
                                          ts[c + 1], sign * st[c + 1].q);
    (void)tv;
    (falling ? maxima : minima).push_back(sign * yv);
  }
  const double tol = merge_fraction * (qmax - qmin);
  return {cluster(std::move(maxima), tol), cluster(std::move(minima), tol)};
}

double lyapunov_exponent(const TrajectoryRecord& traj, double fit_start, double fit_end) {
  if (!traj.eps_ic) throw ConfigError("lyapunov_exponent: trajectory carries no eps_Ic samples");
  if (!(fit_end > fit_start)) throw ConfigError("lyapunov_exponent: empty fit window");
  require_span(traj, fit_start, fit_end, "lyapunov_exponent");
  const auto [first, last] = window_indices(traj.times, fit_start, fit_end);
  std::vector<double> x, y;
  x.reserve(last - first);
  y.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) {
    const double v = (*traj.eps_ic)[i];
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "lyapunov_exponent: eps_Ic = " << v << " <= 0 at t = " << traj.times[i];
      throw NumericalError(os.str());
    }
    x.push_back(traj.times[i]);
    y.push_back(std::log(v));
  }
  return least_squares_slope(x, y);
}

double lyapunov_exponent_envelope(const TrajectoryRecord& traj, double fit_start, double fit_end,
                                  double tau) {
  if (!traj.eps_ic) throw ConfigError("lyapunov_exponent: trajectory carries no eps_Ic samples");
  if (!(tau > 0.0) || !(fit_end > fit_start)) throw ConfigError("lyapunov_exponent: bad window");
  require_span(traj, fit_start, fit_end, "lyapunov_exponent");
  const double block = 2.0 * tau;
  const auto blocks = static_cast<int>(std::floor((fit_end - fit_start) / block + 1e-9));
  if (blocks < 2) throw ConfigError("lyapunov_exponent: window shorter than two 2-tau blocks");
  std::vector<double> x, y;
  for (int b = 0; b < blocks; ++b) {
    const double lo = fit_start + b * block;
    const double hi = lo + block;
    auto [first, last] = window_indices(traj.times, lo, hi);
    if (b + 1 < blocks && last > first && traj.times[last - 1] >= hi - 1e-9 * std::max(1.0, hi)) {
      --last;  // half-open blocks except the final one
    }
    double best = 0.0;
    double best_t = lo;
    for (std::size_t i = first; i < last; ++i) {
      const double v = std::abs((*traj.eps_ic)[i]);
      if (v > best) {
        best = v;
        best_t = traj.times[i];
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) {
      std::ostringstream os;
      os << "lyapunov_exponent: eps_Ic vanishes on the block starting at t = " << lo;
      throw NumericalError(os.str());
    }
    x.push_back(best_t);
    y.push_back(std::log(best));
  }
  return least_squares_slope(x, y);
}

double period_max_amplitude(const TrajectoryRecord& traj, double tau) {
  if (!(tau > 0.0)) throw ConfigError("period_max_amplitude: tau must be > 0");
  if (traj.empty()) throw ConfigError("period_max_amplitude: empty trajectory");
  const double t_to = traj.times.back();
  require_span(traj, t_to - tau, t_to, "period_max_amplitude");
  auto [first, last] = window_indices(traj.times, t_to - tau, t_to);
  first = first > 0 ? first - 1 : first;
  const std::vector<double> times(traj.times.begin() + first, traj.times.begin() + last);
  std::vector<double> amp;
  amp.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) amp.push_back(traj.states[i].abs_alpha());
  return refined_max(times, amp, t_to - tau, t_to).second;
}

}  // namespace optomech
