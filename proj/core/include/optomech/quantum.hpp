#pragma once

#include <Eigen/Core>
#include <vector>

#include "optomech/classical.hpp"
#include "optomech/integrator.hpp"
#include "optomech/params.hpp"
#include "optomech/state.hpp"

namespace optomech {

using Matrix4 = Eigen::Matrix4d;

/// Generator of the linearized quadrature dynamics over (dq, dp, dx, dy).
struct DriftMatrix {
  Matrix4 m = Matrix4::Zero();
};

/// Symmetric second moments V_kl = <u_k u_l + u_l u_k>/2, vacuum variance 1/2.
struct CovarianceState {
  Matrix4 v = Matrix4::Identity() * 0.5;

  static CovarianceState vacuum() { return {}; }
  /// Thermal mechanics with occupation n_m, vacuum cavity.
  static CovarianceState thermal(double n_m);
};

struct EntanglementSample {
  double t = 0.0;
  double eta = 0.0;  // smallest partially transposed symplectic eigenvalue
  double e_p = 0.0;  // -ln(2 eta)
  double e_n = 0.0;  // max(0, e_p)
};

DriftMatrix drift_matrix(double t, const ClassicalState& s, const SystemParams& params);

/// diag[0, gamma_m (2 n_m + 1), kappa, kappa].
Matrix4 noise_matrix(const SystemParams& params);

/// M V + V M^T + D, symmetrized.
Matrix4 covariance_rhs(const CovarianceState& V, const DriftMatrix& M, const Matrix4& D);

/// Logarithmic negativity of the mechanical/cavity bipartition. Throws
/// NumericalError for an unphysical V (Sigma^2 - 4 det V below -1e-12 Sigma^2).
EntanglementSample log_negativity(const CovarianceState& V);

/// Smallest symplectic eigenvalue of V (>= 1/2 for a physical state).
double min_symplectic_eigenvalue(const CovarianceState& V);

/// Samples of the joint classical + covariance evolution.
struct JointTrajectory {
  TrajectoryRecord classical;
  std::vector<CovarianceState> covariances;
  std::vector<EntanglementSample> entanglement;
  /// Times at which V violated physicality by more than 1e-9.
  std::vector<double> physicality_warnings;
  double max_asymmetry = 0.0;
  double min_symplectic = 0.0;
};

/// Integrates the mean field together with the 10 independent entries of V.
/// With `init_eps` the tangent dynamics are co-integrated as well (excluded
/// from step control), making the classical record identical to the one from
/// integrate_classical under the same configuration.
JointTrajectory integrate_joint(const SystemParams& params, const ClassicalState& init_classical,
                                const CovarianceState& init_cov, double t_end,
                                const IntegratorConfig& cfg = {},
                                const std::optional<PerturbationState>& init_eps = std::nullopt);

/// Maximum of E_N over the final period [t_end - tau, t_end].
double en_max_over_period(const std::vector<EntanglementSample>& samples, double tau);

struct StabilityReport {
  bool stable = false;
  double worst_real_part = 0.0;
};

inline constexpr int kDefaultStabilitySamples = 64;

/// Eigenvalues of M(t) at n_samples uniformly spaced times over the final
/// period of `traj` (states interpolated from the record).
StabilityReport stability_check(const SystemParams& params, const TrajectoryRecord& traj,
                                int n_samples = kDefaultStabilitySamples);

}  // namespace optomech
