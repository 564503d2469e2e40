#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace optomech {

/// Model rates and drives, all in units of the mechanical frequency.
///
/// `omega_m` is the unit and is always exactly 1 for parameter sets built by
/// this library. Time is measured in 1/omega_m.
struct SystemParams {
  double omega_m = 1.0;
  double gamma_m = 1e-6;      // mechanical damping
  double kappa = 0.2;         // cavity decay
  double delta0 = 1.0;        // bare detuning omega_c - omega_l
  double g = 4e-6;            // single-photon optomechanical coupling
  double E = 6e4;             // cavity drive amplitude
  double lambda_gain = 0.0;   // OPA gain
  double theta = 0.0;         // OPA pump phase, [0, 2 pi)
  double omega_pump = 1.16;   // OPA detuning
  double n_m = 0.0;           // thermal phonon occupation

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  double quality_factor() const { return omega_m / gamma_m; }

  /// Modulation period 2 pi / Omega; falls back to 2 pi / omega_m when Omega == 0.
  double modulation_period() const;

  bool operator==(const SystemParams&) const = default;
};

/// Field names in serialization order.
const std::vector<std::string>& system_param_keys();

/// Flat key/value view using the field names above.
std::vector<std::pair<std::string, double>> to_key_values(const SystemParams& p);

/// Applies `kv` over `base`. Unknown keys throw ConfigError.
SystemParams from_key_values(const std::map<std::string, double>& kv,
                             SystemParams base = {});

/// Sets one field by name; returns false for an unknown key.
bool set_param(SystemParams& p, const std::string& key, double value);
double get_param(const SystemParams& p, const std::string& key);

}  // namespace optomech
