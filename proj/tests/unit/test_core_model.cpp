#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/physical.hpp"
#include "support/fixtures.hpp"

using namespace optomech;

TEST(ThermalOccupation, ZeroTemperatureIsExactlyZero) {
  EXPECT_EQ(thermal_occupation(0.0, 1e6), 0.0);
  EXPECT_EQ(thermal_occupation(0.0, 1e3), 0.0);
}

TEST(ThermalOccupation, LnTwoGivesOne) {
  const double f = 1e6;
  const double T = constants::hbar * constants::two_pi * f / (constants::boltzmann * std::log(2.0));
  EXPECT_NEAR(thermal_occupation(T, f), 1.0, 1e-12);
}

TEST(ThermalOccupation, MatchesHighPrecisionValues) {
  // 40-digit evaluation of [exp(hbar w / kB T) - 1]^-1 at w = 2 pi x 1 MHz.
  EXPECT_NEAR(thermal_occupation(1e-3, 1e6), 20.340618351800996813, 1e-12 * 20.34);
  EXPECT_NEAR(thermal_occupation(1.0, 1e6), 20836.119140093938632, 1e-12 * 20836.1);
  EXPECT_NEAR(thermal_occupation(10.0, 1e6), 208365.69136134563099, 1e-12 * 208365.7);
}

TEST(ThermalOccupation, RejectsNegativeTemperature) {
  EXPECT_THROW(thermal_occupation(-1e-3, 1e6), ConfigError);
  EXPECT_THROW(thermal_occupation(1.0, 0.0), ConfigError);
}

TEST(ThermalOccupation, MonotoneInTemperature) {
  double prev = 0.0;
  for (double T = 1e-4; T < 20.0; T *= 1.7) {
    const double n = thermal_occupation(T, 1e6);
    EXPECT_GT(n, prev);
    prev = n;
  }
}

TEST(DeriveSystemParams, CavityDecayNearQuotedSetup) {
  PhysicalSetup s;
  const SystemParams p = derive_system_params(s, 1.0);
  // kappa / 2 pi = c / (4 F L) ~ 0.21 MHz, so kappa / omega_m ~ 0.21.
  EXPECT_NEAR(p.kappa, constants::speed_of_light / (4.0 * s.finesse * s.cavity_length) / s.mech_freq, 1e-12);
  EXPECT_NEAR(p.kappa, 0.21, 0.005);
  EXPECT_EQ(p.omega_m, 1.0);
  EXPECT_NEAR(p.gamma_m, 1e-6, 1e-18);
}

TEST(DeriveSystemParams, DoublingFinesseHalvesKappa) {
  PhysicalSetup s;
  const double k1 = derive_system_params(s, 1.0).kappa;
  s.finesse *= 2.0;
  EXPECT_NEAR(derive_system_params(s, 1.0).kappa, k1 / 2.0, 1e-15);
}

TEST(DeriveSystemParams, DriveAndCouplingInQuotedRegime) {
  const SystemParams p = derive_system_params(PhysicalSetup{}, 1.0);
  EXPECT_GT(p.E, 1e4);
  EXPECT_LT(p.E, 1e5);
  EXPECT_GT(p.g, 1e-7);
  EXPECT_LT(p.g, 1e-5);
  EXPECT_EQ(p.lambda_gain, 0.0);
  EXPECT_EQ(p.n_m, 0.0);
  EXPECT_NO_THROW(p.validate());
}

TEST(DeriveSystemParams, RejectsNonPositiveFields) {
  PhysicalSetup s;
  s.mass = 0.0;
  EXPECT_THROW(derive_system_params(s, 1.0), ConfigError);
  s = PhysicalSetup{};
  s.laser_wavelength = -1.0;
  EXPECT_THROW(derive_system_params(s, 1.0), ConfigError);
}

TEST(SystemParams, DefaultsValidate) { EXPECT_NO_THROW(SystemParams{}.validate()); }

TEST(SystemParams, RejectsInvalid) {
  auto bad = [](auto mutate) {
    SystemParams p = fixtures::fig1();
    mutate(p);
    return p;
  };
  EXPECT_THROW(bad([](SystemParams& p) { p.kappa = 0.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SystemParams& p) { p.gamma_m = -1.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SystemParams& p) { p.n_m = -0.1; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SystemParams& p) { p.theta = constants::two_pi; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SystemParams& p) { p.theta = -0.1; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SystemParams& p) { p.omega_m = 2.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SystemParams& p) { p.E = std::nan(""); }).validate(), ConfigError);
}

TEST(SystemParams, DetuningsMayBeNegative) {
  SystemParams p = fixtures::fig1();
  p.delta0 = -1.0;
  p.omega_pump = -0.5;
  EXPECT_NO_THROW(p.validate());
}

TEST(SystemParams, QualityFactorAndPeriod) {
  const SystemParams p = fixtures::fig1();
  EXPECT_DOUBLE_EQ(p.quality_factor(), 1e6);
  EXPECT_DOUBLE_EQ(p.modulation_period(), constants::two_pi / 1.16);
  SystemParams q = p;
  q.omega_pump = 0.0;
  EXPECT_DOUBLE_EQ(q.modulation_period(), constants::two_pi);
}

TEST(SystemParams, KeyValueRoundTrip) {
  SystemParams p = fixtures::fig6(0.043);
  p.theta = 1.25;
  p.n_m = 17.5;
  std::map<std::string, double> kv;
  for (const auto& [k, v] : to_key_values(p)) kv[k] = v;
  EXPECT_EQ(kv.size(), system_param_keys().size());
  EXPECT_EQ(from_key_values(kv), p);
}

TEST(SystemParams, KeyNamesMirrorFields) {
  const std::vector<std::string> expected = {"omega_m", "gamma_m", "kappa", "delta0", "g", "E",
                                             "lambda_gain", "theta", "omega_pump", "n_m"};
  EXPECT_EQ(system_param_keys(), expected);
}

TEST(SystemParams, UnknownKeyRejected) {
  EXPECT_THROW(from_key_values({{"kapa", 0.2}}), ConfigError);
  SystemParams p;
  EXPECT_FALSE(set_param(p, "kapa", 0.2));
  EXPECT_TRUE(set_param(p, "kappa", 0.3));
  EXPECT_EQ(get_param(p, "kappa"), 0.3);
}
