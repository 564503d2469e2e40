#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "optomech/params.hpp"

namespace optomech {

using cdouble = std::complex<double>;

/// Time-independent mean-field solution (Fourier order zero).
struct ZerothOrderSolution {
  double q0 = 0.0;
  double p0 = 0.0;
  cdouble a0{};
  double delta_eff = 0.0;  // Delta0 - g q0
  bool multistable = false;
  /// Candidate values of |a0|^2 when several self-consistent branches exist.
  std::vector<double> branches;
};

/// First-order Fourier coefficients of <a(t)> around the zeroth-order solution.
struct FirstOrderSolution {
  cdouble a_plus{};
  cdouble a_minus{};
  double eps_s = 0.0;  // 2 Lambda E
};

/// Solves q0 = g |E / (kappa + i (Delta0 - g q0))|^2 / omega_m.
///
/// Writing y = g q0 the condition is the real cubic
///   y^3 - 2 Delta0 y^2 + (kappa^2 + Delta0^2) y - (g^2/omega_m) E^2 = 0,
/// solved in closed form then polished with one Newton step. When three
/// positive roots exist the smallest-intensity branch is returned and
/// `multistable` is set.
ZerothOrderSolution solve_zeroth_order(const SystemParams& params);

/// Evaluates the resonance denominator d(Omega) for complex Omega.
cdouble d_of_omega(cdouble omega, const SystemParams& params, const ZerothOrderSolution& z);

/// Natural magnitude of d(Omega), used to decide when d is effectively zero.
double d_scale(cdouble omega, const SystemParams& params, const ZerothOrderSolution& z);

/// Coefficients c0..c4 (ascending powers of Omega) of d(Omega).
std::array<cdouble, 5> d_polynomial(const SystemParams& params, const ZerothOrderSolution& z);

/// Four roots of d(Omega) = 0, sorted by real part (ties by imaginary part).
std::array<cdouble, 4> d_roots(const SystemParams& params, const ZerothOrderSolution& z);

/// a_+ and a_- at Omega = params.omega_pump. Throws NearResonanceError when
/// |d(Omega)| is below 1e-12 of its natural scale.
FirstOrderSolution first_order_coeffs(const SystemParams& params, const ZerothOrderSolution& z);

/// a0 + eps_s e^{-i Omega t} a_+ + eps_s^* e^{i Omega t} a_-.
cdouble analytic_mean(double t, const ZerothOrderSolution& z, const FirstOrderSolution& f,
                      const SystemParams& params);

/// Hybrid-mode squeezing resonances Omega = 2 omega_m -/+ g0 with g0 = sqrt(2) g |a0|.
std::pair<double, double> predicted_entanglement_peaks(const SystemParams& params,
                                                       const ZerothOrderSolution& z);

/// Effective optomechanical coupling sqrt(2) g |a0|.
double effective_coupling(const SystemParams& params, const ZerothOrderSolution& z);

}  // namespace optomech
