#pragma once

#include <numbers>

namespace optomech::constants {

// CODATA 2018 exact / recommended values (SI).
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double boltzmann = 1.380649e-23;      // J / K
inline constexpr double speed_of_light = 299792458.0;  // m / s

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace optomech::constants
