#include "optomech/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "optomech/errors.hpp"
#include "optomech/series.hpp"

namespace optomech {

namespace {

constexpr double kPhysicalitySlack = 1e-9;

double det2(const Eigen::Matrix2d& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

// Upper triangle, row major: (0,0) (0,1) (0,2) (0,3) (1,1) (1,2) (1,3) (2,2) (2,3) (3,3).
constexpr int kTriRow[10] = {0, 0, 0, 0, 1, 1, 1, 2, 2, 3};
constexpr int kTriCol[10] = {0, 1, 2, 3, 1, 2, 3, 2, 3, 3};

template <class Vec>
Matrix4 unpack(const Vec& y, std::size_t offset) {
  Matrix4 v;
  for (int k = 0; k < 10; ++k) {
    v(kTriRow[k], kTriCol[k]) = y[offset + k];
    v(kTriCol[k], kTriRow[k]) = y[offset + k];
  }
  return v;
}

}  // namespace

CovarianceState CovarianceState::thermal(double n_m) {
  CovarianceState c;
  c.v = Matrix4::Zero();
  c.v(0, 0) = c.v(1, 1) = (2.0 * n_m + 1.0) / 2.0;
  c.v(2, 2) = c.v(3, 3) = 0.5;
  return c;
}

DriftMatrix drift_matrix(double t, const ClassicalState& s, const SystemParams& params) {
  const double phase = params.omega_pump * t - params.theta;
  const double rc = 2.0 * params.lambda_gain * std::cos(phase);
  const double rs = 2.0 * params.lambda_gain * std::sin(phase);
  const double detuning = params.delta0 - params.g * s.q;
  const double re_g = std::sqrt(2.0) * params.g * s.alpha_r;
  const double im_g = std::sqrt(2.0) * params.g * s.alpha_i;
  DriftMatrix d;
  auto& m = d.m;
  m << 0.0, params.omega_m, 0.0, 0.0,
      -params.omega_m, -params.gamma_m, re_g, im_g,
      -im_g, 0.0, -params.kappa + rc, detuning - rs,
      re_g, 0.0, -detuning - rs, -params.kappa - rc;
  return d;
}

Matrix4 noise_matrix(const SystemParams& params) {
  Matrix4 d = Matrix4::Zero();
  d(1, 1) = params.gamma_m * (2.0 * params.n_m + 1.0);
  d(2, 2) = params.kappa;
  d(3, 3) = params.kappa;
  return d;
}

Matrix4 covariance_rhs(const CovarianceState& V, const DriftMatrix& M, const Matrix4& D) {
  const Matrix4 mv = M.m * V.v;
  Matrix4 out = mv + mv.transpose() + D;
  return 0.5 * (out + out.transpose());
}

EntanglementSample log_negativity(const CovarianceState& V) {
  const Matrix4& v = V.v;
  const double det_a = det2(v.block<2, 2>(0, 0));
  const double det_b = det2(v.block<2, 2>(2, 2));
  const double det_c = det2(v.block<2, 2>(0, 2));
  const double sigma = det_a + det_b - 2.0 * det_c;
  const double det_v = v.determinant();
  double disc = sigma * sigma - 4.0 * det_v;
  if (disc < 0.0) {
    if (disc < -1e-12 * std::max(1.0, sigma * sigma)) {
      std::ostringstream os;
      os << "log_negativity: unphysical covariance (Sigma^2 - 4 det V = " << disc << ")";
      throw NumericalError(os.str());
    }
    disc = 0.0;
  }
  const double inner = sigma - std::sqrt(disc);
  if (!(inner > 0.0)) {
    std::ostringstream os;
    os << "log_negativity: unphysical covariance (Sigma - sqrt(...) = " << inner << ")";
    throw NumericalError(os.str());
  }
  EntanglementSample s;
  s.eta = std::sqrt(inner) / std::sqrt(2.0);
  s.e_p = -std::log(2.0 * s.eta);
  s.e_n = std::max(0.0, s.e_p);
  return s;
}

double min_symplectic_eigenvalue(const CovarianceState& V) {
  const Matrix4& v = V.v;
  const double det_a = det2(v.block<2, 2>(0, 0));
  const double det_b = det2(v.block<2, 2>(2, 2));
  const double det_c = det2(v.block<2, 2>(0, 2));
  const double delta = det_a + det_b + 2.0 * det_c;
  const double det_v = v.determinant();
  const double disc = std::max(0.0, delta * delta - 4.0 * det_v);
  const double closed_form = std::sqrt(std::max(0.0, (delta - std::sqrt(disc)) / 2.0));
  // The closed form loses half the digits when the two symplectic eigenvalues
  // nearly coincide (e.g. close to a pure state). Fall back to the spectrum of
  // Omega V, whose eigenvalues are +/- i nu.
  if (closed_form > 0.5 + 1e-6) return closed_form;
  Matrix4 omega = Matrix4::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  Eigen::EigenSolver<Matrix4> es(omega * v, false);
  double nu = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) nu = std::min(nu, std::abs(es.eigenvalues()(i).imag()));
  return nu;
}

namespace {

template <std::size_t N>
JointTrajectory run_joint(const SystemParams& params, const ClassicalState& init,
                          const CovarianceState& init_cov, double t_end,
                          const IntegratorConfig& cfg, const PerturbationState& init_eps) {
  constexpr bool kWithEps = N == 18;
  StateVector<N> y{};
  y[0] = init.q;
  y[1] = init.p;
  y[2] = init.alpha_r;
  y[3] = init.alpha_i;
  for (int k = 0; k < 10; ++k) y[4 + k] = init_cov.v(kTriRow[k], kTriCol[k]);
  if constexpr (kWithEps) {
    y[14] = init_eps.eps_q;
    y[15] = init_eps.eps_p;
    y[16] = init_eps.eps_ar;
    y[17] = init_eps.eps_ai;
  }
  const Matrix4 noise = noise_matrix(params);

  auto rhs = [&](double t, const StateVector<N>& u, StateVector<N>& du) {
    const ClassicalState s{u[0], u[1], u[2], u[3]};
    const ClassicalState ds = mean_field_rhs(t, s, params);
    du[0] = ds.q;
    du[1] = ds.p;
    du[2] = ds.alpha_r;
    du[3] = ds.alpha_i;
    const DriftMatrix m = drift_matrix(t, s, params);
    const Matrix4 v = unpack(u, 4);
    const Matrix4 mv = m.m * v;
    for (int k = 0; k < 10; ++k) {
      const int r = kTriRow[k], c = kTriCol[k];
      du[4 + k] = mv(r, c) + mv(c, r) + noise(r, c);
    }
    if constexpr (kWithEps) {
      const PerturbationState de =
          perturbation_rhs(t, s, PerturbationState{u[14], u[15], u[16], u[17]}, params);
      du[14] = de.eps_q;
      du[15] = de.eps_p;
      du[16] = de.eps_ar;
      du[17] = de.eps_ai;
    }
  };

  JointTrajectory out;
  auto& rec = out.classical;
  if constexpr (kWithEps) {
    rec.eps.emplace();
    rec.eps_ic.emplace();
  }
  out.min_symplectic = std::numeric_limits<double>::infinity();
  const double dt = params.modulation_period() / cfg.dense_samples_per_tau;
  const auto expected = static_cast<std::size_t>(std::max(0.0, (t_end - cfg.record_from) / dt)) + 2;
  rec.times.reserve(expected);
  rec.states.reserve(expected);
  out.covariances.reserve(expected);
  out.entanglement.reserve(expected);

  auto observe = [&](double t, const StateVector<N>& u) {
    const ClassicalState s{u[0], u[1], u[2], u[3]};
    rec.times.push_back(t);
    rec.states.push_back(s);
    if constexpr (kWithEps) {
      const PerturbationState e{u[14], u[15], u[16], u[17]};
      rec.eps->push_back(e);
      rec.eps_ic->push_back(intensity_deviation(s, e));
    }
    CovarianceState cov;
    cov.v = unpack(u, 4);
    out.max_asymmetry = std::max(out.max_asymmetry, (cov.v - cov.v.transpose()).cwiseAbs().maxCoeff());
    const double nu = min_symplectic_eigenvalue(cov);
    out.min_symplectic = std::min(out.min_symplectic, nu);
    EntanglementSample es;
    try {
      es = log_negativity(cov);
    } catch (const NumericalError&) {
      es.eta = 0.0;
      es.e_p = std::numeric_limits<double>::quiet_NaN();
      es.e_n = std::numeric_limits<double>::quiet_NaN();
      out.physicality_warnings.push_back(t);
    }
    if (nu < 0.5 - kPhysicalitySlack &&
        (out.physicality_warnings.empty() || out.physicality_warnings.back() != t)) {
      out.physicality_warnings.push_back(t);
    }
    es.t = t;
    out.covariances.push_back(cov);
    out.entanglement.push_back(es);
  };

  rec.stats = integrate_dense<N>(rhs, 0.0, y, t_end, dt, cfg, 14, observe);
  rec.divergent = rec.stats.diverged;
  return out;
}

}  // namespace

JointTrajectory integrate_joint(const SystemParams& params, const ClassicalState& init_classical,
                                const CovarianceState& init_cov, double t_end,
                                const IntegratorConfig& cfg,
                                const std::optional<PerturbationState>& init_eps) {
  params.validate();
  cfg.validate();
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be > 0");
  if (!init_classical.finite()) throw ConfigError("initial classical state is not finite");
  if (!init_cov.v.allFinite()) throw ConfigError("initial covariance is not finite");
  if ((init_cov.v - init_cov.v.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("initial covariance is not symmetric");
  }
  if (init_eps) return run_joint<18>(params, init_classical, init_cov, t_end, cfg, *init_eps);
  return run_joint<14>(params, init_classical, init_cov, t_end, cfg, {});
}

double en_max_over_period(const std::vector<EntanglementSample>& samples, double tau) {
  if (!(tau > 0.0)) throw ConfigError("en_max_over_period: tau must be > 0");
  if (samples.empty()) throw ConfigError("en_max_over_period: no samples");
  const double t_to = samples.back().t;
  if (samples.front().t > t_to - tau + 1e-9 * std::max(1.0, t_to)) {
    throw ConfigError("en_max_over_period: samples do not cover a full period");
  }
  std::vector<double> ts, en;
  const double t_from = t_to - tau;
  // One sample of margin each side for the parabola refinement.
  std::size_t first = samples.size();
  for (std::size_t i = samples.size(); i-- > 0;) {
    if (samples[i].t < t_from - 1e-9 * std::max(1.0, t_to)) break;
    first = i;
  }
  if (first > 0) --first;
  for (std::size_t i = first; i < samples.size(); ++i) {
    ts.push_back(samples[i].t);
    en.push_back(samples[i].e_n);
  }
  for (double v : en) {
    if (!std::isfinite(v)) throw NumericalError("en_max_over_period: non-finite E_N in window");
  }
  return std::max(0.0, refined_max(ts, en, t_from, t_to).second);
}

StabilityReport stability_check(const SystemParams& params, const TrajectoryRecord& traj,
                                int n_samples) {
  if (n_samples < 1) throw ConfigError("stability_check: n_samples must be >= 1");
  if (traj.empty()) throw ConfigError("stability_check: empty trajectory");
  StabilityReport report;
  if (traj.divergent) {
    report.stable = false;
    report.worst_real_part = std::numeric_limits<double>::infinity();
    return report;
  }
  const double tau = params.modulation_period();
  const double t_end = traj.times.back();
  const double t_start = std::max(traj.times.front(), t_end - tau);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    const double t = t_start + (t_end - t_start) * k / n_samples;
    const ClassicalState s = interpolate_state(traj, params, t);
    const DriftMatrix m = drift_matrix(t, s, params);
    Eigen::EigenSolver<Matrix4> es(m.m, false);
    for (int i = 0; i < 4; ++i) worst = std::max(worst, es.eigenvalues()(i).real());
  }
  report.worst_real_part = worst;
  report.stable = worst < 0.0;
  return report;
}

}  // namespace optomech
