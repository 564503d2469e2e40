#pragma once

#include "optomech/params.hpp"

namespace optomech {

/// Laboratory description of the cavity and mirror in SI units.
struct PhysicalSetup {
  double cavity_length = 25e-3;        // m
  double finesse = 1.4e4;
  double mass = 150e-12;               // kg
  double laser_power = 21.9e-3;        // W
  double laser_wavelength = 1064e-9;   // m
  double mech_freq = 1e6;              // Hz (omega_m / 2 pi)
  double quality_factor = 1e6;

  void validate() const;
};

/// Bose-Einstein occupation [exp(hbar w / kB T) - 1]^-1 for a mode with
/// frequency `mech_freq_hz` (so w = 2 pi mech_freq_hz). Exactly 0 at T = 0.
double thermal_occupation(double temperature_kelvin, double mech_freq_hz);

/// Decay rate kappa = pi c / (2 F L) in rad/s.
double cavity_decay_rate(const PhysicalSetup& setup);

/// Zero-point motion sqrt(hbar / (2 m w_m)) in metres.
double zero_point_motion(const PhysicalSetup& setup);

/// Normalizes the setup to omega_m = 1.
///
/// kappa = pi c/(2FL), E = sqrt(2 kappa P / hbar w_l), g = x_zpf w_c / L with
/// w_c taken equal to w_l = 2 pi c / lambda, gamma_m = omega_m / Q. The OPA
/// fields are left at zero and n_m at 0; the detuning is passed in.
SystemParams derive_system_params(const PhysicalSetup& setup, double delta0);

}  // namespace optomech
