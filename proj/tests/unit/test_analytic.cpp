#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "optomech/analytic.hpp"
#include "optomech/classical.hpp"
#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "support/fixtures.hpp"

using namespace optomech;

namespace {

double analytic_deviation(const SystemParams& p) {
  const double tau = p.modulation_period();
  const auto z = solve_zeroth_order(p);
  const auto f = first_order_coeffs(p, z);
  const auto rec = integrate_classical(p, {}, std::nullopt, 300.0 * tau);
  double dev = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (rec.times[i] < 299.0 * tau - 1e-9) continue;
    const double num = rec.states[i].abs_alpha();
    dev = std::max(dev, std::abs(num - std::abs(analytic_mean(rec.times[i], z, f, p))));
    scale = std::max(scale, num);
  }
  return dev / scale;
}

}  // namespace

TEST(ZerothOrder, NoCouplingIsBareCavity) {
  SystemParams p = fixtures::fig1();
  p.g = 0.0;
  const auto z = solve_zeroth_order(p);
  EXPECT_EQ(z.q0, 0.0);
  EXPECT_EQ(z.p0, 0.0);
  const cdouble expect = p.E / cdouble(p.kappa, p.delta0);
  EXPECT_NEAR(std::abs(z.a0 - expect), 0.0, 1e-12 * std::abs(expect));
  EXPECT_FALSE(z.multistable);
}

TEST(ZerothOrder, NoDriveIsVacuum) {
  SystemParams p = fixtures::fig1();
  p.E = 0.0;
  const auto z = solve_zeroth_order(p);
  EXPECT_EQ(z.q0, 0.0);
  EXPECT_EQ(std::abs(z.a0), 0.0);
}

TEST(ZerothOrder, SelfConsistencyResidual) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    SystemParams p = fixtures::fig1();
    p.E = 1e3 + 1.2e5 * u(rng);
    p.kappa = 0.05 + 0.5 * u(rng);
    p.delta0 = -2.0 + 4.0 * u(rng);
    const auto z = solve_zeroth_order(p);
    EXPECT_EQ(z.p0, 0.0);
    const double lhs = z.q0;
    const double rhs = p.g * std::norm(p.E / cdouble(p.kappa, p.delta0 - p.g * z.q0)) / p.omega_m;
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
    EXPECT_NEAR(z.delta_eff, p.delta0 - p.g * z.q0, 1e-12 * std::max(1.0, std::abs(p.delta0)));
    const cdouble a0 = p.E / cdouble(p.kappa, z.delta_eff);
    EXPECT_LT(std::abs(z.a0 - a0), 1e-10 * std::abs(a0));
    if (z.multistable) {
      ASSERT_EQ(z.branches.size(), 3u);
      EXPECT_NEAR(std::norm(z.a0), z.branches.front(), 1e-8 * z.branches.front());
    }
  }
}

TEST(ZerothOrder, MatchesUnmodulatedLongTimeMean) {
  SystemParams p = fixtures::fig1();
  p.lambda_gain = 0.0;
  const auto z = solve_zeroth_order(p);
  const auto rec = integrate_classical(p, {}, std::nullopt, 300.0 * p.modulation_period());
  const auto& s = rec.states.back();
  EXPECT_LT(std::abs(s.alpha() - z.a0), 1e-6 * std::abs(z.a0));
  EXPECT_LT(std::abs(s.q - z.q0), 1e-6 * std::abs(z.q0));
  EXPECT_LT(std::abs((p.delta0 - p.g * s.q) - z.delta_eff), 1e-6 * std::abs(z.delta_eff) + 1e-6);
}

TEST(FirstOrder, NoCouplingKillsAMinus) {
  SystemParams p = fixtures::fig1();
  p.g = 0.0;
  const auto f = first_order_coeffs(p, solve_zeroth_order(p));
  EXPECT_EQ(f.a_minus, cdouble(0.0, 0.0));
  EXPECT_DOUBLE_EQ(f.eps_s, 2.0 * p.lambda_gain * p.E);
}

TEST(FirstOrder, PhaseShiftByPiFlipsSigns) {
  SystemParams p = fixtures::fig1();
  p.theta = 0.3;
  const auto z = solve_zeroth_order(p);
  const auto a = first_order_coeffs(p, z);
  p.theta = 0.3 + constants::pi;
  const auto b = first_order_coeffs(p, z);
  EXPECT_LT(std::abs(a.a_plus + b.a_plus), 1e-12 * std::abs(a.a_plus));
  EXPECT_LT(std::abs(a.a_minus + b.a_minus), 1e-12 * std::abs(a.a_minus));
}

TEST(FirstOrder, NearResonanceRejected) {
  SystemParams p = fixtures::fig1();
  p.g = 0.0;
  p.gamma_m = 1e-14;
  p.omega_pump = 1.0;  // mechanical factor omega_m^2 - Omega^2 - i gamma Omega ~ 1e-14
  p.validate();
  EXPECT_THROW(first_order_coeffs(p, solve_zeroth_order(p)), NearResonanceError);
}

TEST(AnalyticMean, ConstantWithoutOpa) {
  SystemParams p = fixtures::fig1();
  p.lambda_gain = 0.0;
  const auto z = solve_zeroth_order(p);
  const auto f = first_order_coeffs(p, z);
  for (double t : {0.0, 1.0, 13.7}) EXPECT_EQ(analytic_mean(t, z, f, p), z.a0);
}

TEST(AnalyticMean, PeriodicInTau) {
  const SystemParams p = fixtures::fig1();
  const auto z = solve_zeroth_order(p);
  const auto f = first_order_coeffs(p, z);
  const double tau = p.modulation_period();
  for (double t : {0.0, 0.37, 5.0, 291.0 * tau + 0.2}) {
    const cdouble a = analytic_mean(t, z, f, p), b = analytic_mean(t + tau, z, f, p);
    EXPECT_LT(std::abs(a - b), 1e-9 * std::abs(a));
  }
}

TEST(AnalyticMean, AgreesWithIntegrationAtFig1) { EXPECT_LT(analytic_deviation(fixtures::fig1()), 0.02); }

TEST(AnalyticMean, FirstOrderDegradesWithDrive) {
  SystemParams lo = fixtures::fig1(), hi = fixtures::fig1();
  lo.E = 4e4;
  hi.E = 8e4;
  EXPECT_GT(analytic_deviation(hi), analytic_deviation(lo));
}

TEST(DOfOmega, NoCouplingCavityRoot) {
  SystemParams p = fixtures::fig1();
  p.g = 0.0;
  const auto z = solve_zeroth_order(p);
  const cdouble w(z.delta_eff, -p.kappa);
  EXPECT_LT(std::abs(d_of_omega(w, p, z)), 1e-12 * d_scale(w, p, z));
}

TEST(DOfOmega, NoCouplingMechanicalRoot) {
  SystemParams p = fixtures::fig1();
  p.g = 0.0;
  const auto z = solve_zeroth_order(p);
  // omega_m^2 - W^2 - i gamma W = 0.
  const cdouble disc = std::sqrt(cdouble(p.omega_m * p.omega_m - p.gamma_m * p.gamma_m / 4.0, 0.0));
  for (const cdouble w : {disc - cdouble(0, p.gamma_m / 2), -disc - cdouble(0, p.gamma_m / 2)}) {
    EXPECT_LT(std::abs(d_of_omega(w, p, z)), 1e-12 * d_scale(w, p, z));
  }
}

TEST(DPolynomial, MatchesDirectEvaluation) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const SystemParams p = fixtures::fig1();
  const auto z = solve_zeroth_order(p);
  const auto c = d_polynomial(p, z);
  for (int k = 0; k < 100; ++k) {
    const cdouble w(u(rng), u(rng) / 3.0);
    cdouble poly = 0.0;
    for (int i = 4; i >= 0; --i) poly = poly * w + c[i];
    EXPECT_LT(std::abs(poly - d_of_omega(w, p, z)), 1e-10 * d_scale(w, p, z));
  }
}

TEST(DRoots, NoCouplingFactorization) {
  SystemParams p = fixtures::fig1();
  p.g = 0.0;
  const auto z = solve_zeroth_order(p);
  const auto r = d_roots(p, z);
  const double s = std::sqrt(p.omega_m * p.omega_m - p.gamma_m * p.gamma_m / 4.0);
  const std::array<cdouble, 4> expect = {cdouble(-p.delta0, -p.kappa), cdouble(-s, -p.gamma_m / 2),
                                         cdouble(s, -p.gamma_m / 2), cdouble(p.delta0, -p.kappa)};
  // delta0 = omega_m = 1 makes the real parts pairwise degenerate; compare as multisets.
  for (const auto& e : expect) {
    double best = 1e9;
    for (const auto& x : r) best = std::min(best, std::abs(x - e));
    EXPECT_LT(best, 1e-9);
  }
}

TEST(DRoots, ResidualsVanish) {
  for (double E : {1e3, 2e4, 4e4, 6e4, 8e4, 1e5}) {
    SystemParams p = fixtures::fig1();
    p.E = E;
    const auto z = solve_zeroth_order(p);
    for (const auto& w : d_roots(p, z)) EXPECT_LT(std::abs(d_of_omega(w, p, z)), 1e-8 * d_scale(w, p, z));
  }
}

TEST(DRoots, SortedByRealPart) {
  const SystemParams p = fixtures::fig1();
  const auto r = d_roots(p, solve_zeroth_order(p));
  for (int i = 1; i < 4; ++i) EXPECT_LE(r[i - 1].real(), r[i].real());
}

TEST(DRoots, LifetimeSplittingAtSmallDrive) {
  SystemParams p = fixtures::fig1();
  p.E = 1e3;
  const auto r = d_roots(p, solve_zeroth_order(p));
  EXPECT_LT(std::abs(r[3].real() - r[2].real()), 1e-3);
  EXPECT_GT(std::abs(r[3].imag() - r[2].imag()), 0.05);
}

TEST(DRoots, RealSplittingWidensWithDrive) {
  double prev = -1.0;
  bool split = false;
  for (double E = 1e3; E <= 1e5; E += 1e3) {
    SystemParams p = fixtures::fig1();
    p.E = E;
    const auto r = d_roots(p, solve_zeroth_order(p));
    const double gap = r[3].real() - r[2].real();
    if (gap > 1e-3) split = true;
    if (split) EXPECT_GE(gap, prev - 1e-12);
    prev = gap;
  }
  EXPECT_TRUE(split);
}

TEST(PredictedPeaks, SymmetricAboutTwoOmega) {
  const SystemParams p = fixtures::fig1();
  const auto z = solve_zeroth_order(p);
  const auto [lo, hi] = predicted_entanglement_peaks(p, z);
  EXPECT_NEAR(0.5 * (lo + hi), 2.0 * p.omega_m, 1e-12);
  EXPECT_NEAR(hi - lo, 2.0 * effective_coupling(p, z), 1e-12);
  EXPECT_NEAR(effective_coupling(p, z), std::sqrt(2.0) * p.g * std::abs(z.a0), 1e-15);
}

TEST(PredictedPeaks, NoCouplingCollapse) {
  SystemParams p = fixtures::fig1();
  p.g = 0.0;
  const auto [lo, hi] = predicted_entanglement_peaks(p, solve_zeroth_order(p));
  EXPECT_EQ(lo, 2.0);
  EXPECT_EQ(hi, 2.0);
}

TEST(PredictedPeaks, SeparationGrowsWithDrive) {
  double prev = 0.0;
  for (double E : {4e4, 6e4, 8e4}) {
    SystemParams p = fixtures::fig1();
    p.E = E;
    const auto [lo, hi] = predicted_entanglement_peaks(p, solve_zeroth_order(p));
    EXPECT_GT(hi - lo, prev);
    prev = hi - lo;
  }
}
