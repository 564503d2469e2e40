#include "optomech/analytic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

constexpr cdouble I{0.0, 1.0};

// Real roots of y^3 + b y^2 + c y + d = 0.
std::vector<double> real_cubic_roots(double b, double c, double d) {
  const double b3 = b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  std::vector<double> roots;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (p < 0.0 && disc < 0.0) {
    // Three real roots (trigonometric form).
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - b3);
    }
  } else {
    const double s = std::sqrt(std::max(disc, 0.0));
    const double u = std::cbrt(-q / 2.0 + s);
    const double v = std::cbrt(-q / 2.0 - s);
    roots.push_back(u + v - b3);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

ZerothOrderSolution solve_zeroth_order(const SystemParams& params) {
  params.validate();
  ZerothOrderSolution z;
  const double k2 = params.kappa * params.kappa;
  const double d0 = params.delta0;
  double intensity = 0.0;

  if (params.E == 0.0) {
    intensity = 0.0;
  } else if (params.g == 0.0) {
    intensity = params.E * params.E / (k2 + d0 * d0);
  } else {
    const double s = params.g * params.g / params.omega_m;
    const double rhs = s * params.E * params.E;
    auto f = [&](double y) { return y * (k2 + (d0 - y) * (d0 - y)) - rhs; };
    auto df = [&](double y) { return k2 + (d0 - y) * (d0 - y) - 2.0 * y * (d0 - y); };

    std::vector<double> ys = real_cubic_roots(-2.0 * d0, k2 + d0 * d0, -rhs);
    std::vector<double> positive;
    for (double y : ys) {
      // One Newton polish step.
      const double der = df(y);
      if (der != 0.0) y -= f(y) / der;
      if (y > 0.0) positive.push_back(y);
    }
    if (positive.empty()) {
      throw NumericalError("solve_zeroth_order: no positive self-consistent intensity");
    }
    std::sort(positive.begin(), positive.end());
    positive.erase(std::unique(positive.begin(), positive.end(),
                               [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
                   positive.end());
    z.multistable = positive.size() > 1;
    for (double y : positive) z.branches.push_back(y / s);
    intensity = positive.front() / s;
  }

  z.q0 = params.g * intensity / params.omega_m;
  z.p0 = 0.0;
  z.delta_eff = params.delta0 - params.g * z.q0;
  z.a0 = params.E / cdouble(params.kappa, z.delta_eff);
  if (z.branches.empty()) z.branches.push_back(intensity);
  return z;
}

std::array<cdouble, 5> d_polynomial(const SystemParams& params, const ZerothOrderSolution& z) {
  const double k = params.kappa;
  const double D = z.delta_eff;
  const double wm = params.omega_m;
  const double gm = params.gamma_m;
  const double n0 = std::norm(z.a0);
  // [k - i(D + W)][k + i(D - W)] = (k^2 + D^2) - 2 i k W - W^2
  const std::array<cdouble, 3> cav{cdouble(k * k + D * D), -2.0 * I * k, cdouble(-1.0)};
  // w_m^2 - i gamma_m W - W^2
  const std::array<cdouble, 3> mech{cdouble(wm * wm), -I * gm, cdouble(-1.0)};
  std::array<cdouble, 5> c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i + j] += cav[i] * mech[j];
  c[0] -= 2.0 * D * params.g * params.g * wm * n0;
  return c;
}

cdouble d_of_omega(cdouble omega, const SystemParams& params, const ZerothOrderSolution& z) {
  const double k = params.kappa;
  const double D = z.delta_eff;
  const double wm = params.omega_m;
  const cdouble mech = wm * wm - omega * omega - I * params.gamma_m * omega;
  return -2.0 * D * params.g * params.g * wm * std::norm(z.a0) +
         (k - I * (D + omega)) * (k + I * (D - omega)) * mech;
}

double d_scale(cdouble omega, const SystemParams& params, const ZerothOrderSolution& z) {
  const double w = std::abs(omega);
  const double cav = params.kappa + std::abs(z.delta_eff) + w;
  const double mech = params.omega_m * params.omega_m + w * w + params.gamma_m * w;
  return cav * cav * mech +
         2.0 * std::abs(z.delta_eff) * params.g * params.g * params.omega_m * std::norm(z.a0);
}

std::array<cdouble, 4> d_roots(const SystemParams& params, const ZerothOrderSolution& z) {
  const auto c = d_polynomial(params, z);
  // Companion matrix of the monic quartic.
  Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
  for (int i = 1; i < 4; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) companion(i, 3) = -c[i] / c[4];
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(companion, false);
  if (es.info() != Eigen::Success) throw NumericalError("d_roots: eigenvalue solver failed");

  std::array<cdouble, 4> roots{};
  for (int i = 0; i < 4; ++i) {
    cdouble r = es.eigenvalues()(i);
    // Newton polish on the polynomial.
    for (int it = 0; it < 3; ++it) {
      cdouble p = c[4], dp = 0.0;
      for (int k = 3; k >= 0; --k) {
        dp = dp * r + p;
        p = p * r + c[k];
      }
      if (std::abs(dp) == 0.0) break;
      const cdouble step = p / dp;
      r -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
    }
    roots[i] = r;
  }
  std::sort(roots.begin(), roots.end(), [](cdouble a, cdouble b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

FirstOrderSolution first_order_coeffs(const SystemParams& params, const ZerothOrderSolution& z) {
  const double k = params.kappa;
  const double D = z.delta_eff;
  const double wm = params.omega_m;
  const double W = params.omega_pump;
  const double g2 = params.g * params.g;
  const cdouble d = d_of_omega(W, params, z);
  const double scale = d_scale(W, params, z);
  if (std::abs(d) < 1e-12 * scale) {
    std::ostringstream os;
    os << "first_order_coeffs: |d(Omega)| = " << std::abs(d) << " is below 1e-12 x " << scale
       << " at Omega = " << W << "; first-order solution is invalid near resonance";
    throw NearResonanceError(os.str());
  }
  const cdouble mech = wm * wm - W * W - I * params.gamma_m * W;
  const cdouble phase = std::polar(1.0, params.theta);
  FirstOrderSolution f;
  f.eps_s = 2.0 * params.lambda_gain * params.E;
  f.a_plus = ((k - I * (D + W)) * mech + I * g2 * wm * std::norm(z.a0)) * phase /
             (d * (k - I * D));
  f.a_minus = I * g2 * wm * z.a0 * z.a0 * std::conj(phase) / (std::conj(d) * (k + I * D));
  return f;
}

cdouble analytic_mean(double t, const ZerothOrderSolution& z, const FirstOrderSolution& f,
                      const SystemParams& params) {
  const double W = params.omega_pump;
  // Reduce the phase modulo 2 pi so that t and t + tau agree to rounding.
  const double phase = std::remainder(W * t, 2.0 * std::numbers::pi);
  return z.a0 + f.eps_s * std::polar(1.0, -phase) * f.a_plus +
         f.eps_s * std::polar(1.0, phase) * f.a_minus;
}

double effective_coupling(const SystemParams& params, const ZerothOrderSolution& z) {
  return std::sqrt(2.0) * params.g * std::abs(z.a0);
}

std::pair<double, double> predicted_entanglement_peaks(const SystemParams& params,
                                                       const ZerothOrderSolution& z) {
  const double g0 = effective_coupling(params, z);
  return {2.0 * params.omega_m - g0, 2.0 * params.omega_m + g0};
}

}  // namespace optomech
