#include "optomech/physical.hpp"

#include <cmath>
#include <string>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

namespace {

struct FieldRef {
  const char* name;
  double SystemParams::*member;
};

constexpr FieldRef kFields[] = {
    {"omega_m", &SystemParams::omega_m},
    {"gamma_m", &SystemParams::gamma_m},
    {"kappa", &SystemParams::kappa},
    {"delta0", &SystemParams::delta0},
    {"g", &SystemParams::g},
    {"E", &SystemParams::E},
    {"lambda_gain", &SystemParams::lambda_gain},
    {"theta", &SystemParams::theta},
    {"omega_pump", &SystemParams::omega_pump},
    {"n_m", &SystemParams::n_m},
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void SystemParams::validate() const {
  for (const auto& f : kFields) {
    require(std::isfinite(this->*f.member), std::string("parameter '") + f.name + "' is not finite");
  }
  require(omega_m == 1.0, "omega_m must be exactly 1 (all rates are in units of omega_m)");
  require(gamma_m > 0.0, "gamma_m must be > 0");
  require(kappa > 0.0, "kappa must be > 0");
  // g, E and lambda_gain may be switched off (0) to isolate sub-dynamics.
  require(g >= 0.0, "g must be >= 0");
  require(E >= 0.0, "E must be >= 0");
  require(lambda_gain >= 0.0, "lambda_gain must be >= 0");
  require(n_m >= 0.0, "n_m must be >= 0");
  require(theta >= 0.0 && theta < constants::two_pi, "theta must lie in [0, 2 pi)");
}

double SystemParams::modulation_period() const {
  const double w = omega_pump != 0.0 ? std::abs(omega_pump) : omega_m;
  return constants::two_pi / w;
}

const std::vector<std::string>& system_param_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : kFields) k.emplace_back(f.name);
    return k;
  }();
  return keys;
}

std::vector<std::pair<std::string, double>> to_key_values(const SystemParams& p) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(std::size(kFields));
  for (const auto& f : kFields) out.emplace_back(f.name, p.*f.member);
  return out;
}

bool set_param(SystemParams& p, const std::string& key, double value) {
  for (const auto& f : kFields) {
    if (key == f.name) {
      p.*f.member = value;
      return true;
    }
  }
  return false;
}

double get_param(const SystemParams& p, const std::string& key) {
  for (const auto& f : kFields) {
    if (key == f.name) return p.*f.member;
  }
  throw ConfigError("unknown parameter '" + key + "'");
}

SystemParams from_key_values(const std::map<std::string, double>& kv, SystemParams base) {
  for (const auto& [key, value] : kv) {
    if (!set_param(base, key, value)) throw ConfigError("unknown parameter '" + key + "'");
  }
  return base;
}

void PhysicalSetup::validate() const {
  require(finite_positive(cavity_length), "cavity_length must be > 0");
  require(finite_positive(finesse), "finesse must be > 0");
  require(finite_positive(mass), "mass must be > 0");
  require(finite_positive(laser_power), "laser_power must be > 0");
  require(finite_positive(laser_wavelength), "laser_wavelength must be > 0");
  require(finite_positive(mech_freq), "mech_freq must be > 0");
  require(finite_positive(quality_factor), "quality_factor must be > 0");
}

double thermal_occupation(double temperature_kelvin, double mech_freq_hz) {
  if (!(temperature_kelvin >= 0.0) || !std::isfinite(temperature_kelvin)) {
    throw ConfigError("temperature must be finite and >= 0");
  }
  if (!finite_positive(mech_freq_hz)) throw ConfigError("mechanical frequency must be > 0");
  if (temperature_kelvin == 0.0) return 0.0;
  const double x = constants::hbar * constants::two_pi * mech_freq_hz /
                   (constants::boltzmann * temperature_kelvin);
  return 1.0 / std::expm1(x);
}

double cavity_decay_rate(const PhysicalSetup& setup) {
  return std::numbers::pi * constants::speed_of_light / (2.0 * setup.finesse * setup.cavity_length);
}

double zero_point_motion(const PhysicalSetup& setup) {
  const double omega_m = constants::two_pi * setup.mech_freq;
  return std::sqrt(constants::hbar / (2.0 * setup.mass * omega_m));
}

SystemParams derive_system_params(const PhysicalSetup& setup, double delta0) {
  setup.validate();
  if (!std::isfinite(delta0)) throw ConfigError("delta0 must be finite");

  const double omega_m = constants::two_pi * setup.mech_freq;
  const double omega_l = constants::two_pi * constants::speed_of_light / setup.laser_wavelength;
  const double kappa = cavity_decay_rate(setup);
  const double drive = std::sqrt(2.0 * kappa * setup.laser_power / (constants::hbar * omega_l));
  const double coupling = zero_point_motion(setup) * omega_l / setup.cavity_length;

  SystemParams p;
  p.omega_m = 1.0;
  p.gamma_m = 1.0 / setup.quality_factor;
  p.kappa = kappa / omega_m;
  p.delta0 = delta0;
  p.g = coupling / omega_m;
  p.E = drive / omega_m;
  p.lambda_gain = 0.0;
  p.theta = 0.0;
  p.omega_pump = 0.0;
  p.n_m = 0.0;
  return p;
}

}  // namespace optomech
