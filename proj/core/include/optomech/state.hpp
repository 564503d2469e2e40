#pragma once

#include <cmath>
#include <complex>

namespace optomech {

/// Mean-field phase-space point (<q>, <p>, Re<a>, Im<a>).
struct ClassicalState {
  double q = 0.0;
  double p = 0.0;
  double alpha_r = 0.0;
  double alpha_i = 0.0;

  std::complex<double> alpha() const { return {alpha_r, alpha_i}; }
  double intensity() const { return alpha_r * alpha_r + alpha_i * alpha_i; }
  double abs_alpha() const { return std::hypot(alpha_r, alpha_i); }
  bool finite() const {
    return std::isfinite(q) && std::isfinite(p) && std::isfinite(alpha_r) && std::isfinite(alpha_i);
  }

  bool operator==(const ClassicalState&) const = default;
};

/// Tangent-space deviation of a ClassicalState.
struct PerturbationState {
  double eps_q = 0.0;
  double eps_p = 0.0;
  double eps_ar = 0.0;
  double eps_ai = 0.0;

  bool operator==(const PerturbationState&) const = default;
};

/// Linearized change of the cavity intensity carried by `e` around `s`:
/// eps_ar^2 + eps_ai^2 + 2 alpha_r eps_ar + 2 alpha_i eps_ai.
inline double intensity_deviation(const ClassicalState& s, const PerturbationState& e) {
  return e.eps_ar * e.eps_ar + e.eps_ai * e.eps_ai + 2.0 * s.alpha_r * e.eps_ar +
         2.0 * s.alpha_i * e.eps_ai;
}

inline constexpr PerturbationState kDefaultPerturbation{1e-10, 1e-10, 1e-10, 1e-10};

}  // namespace optomech
