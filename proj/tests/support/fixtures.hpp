#pragma once

#include "optomech/params.hpp"

namespace fixtures {

/// (E, g, gamma_m, kappa, Delta0) = (6e4, 4e-6, 1e-6, 0.2, 1), Lambda = 0.02, Omega = 1.16.
inline optomech::SystemParams fig1() {
  optomech::SystemParams p;
  p.E = 6e4;
  p.lambda_gain = 0.02;
  p.omega_pump = 1.16;
  return p;
}

/// E = 8.6e4, Omega = 1.16 with the given gain.
inline optomech::SystemParams fig6(double lambda) {
  optomech::SystemParams p = fig1();
  p.E = 8.6e4;
  p.lambda_gain = lambda;
  return p;
}

/// Linear, uncoupled system: no optomechanics, no drive, no OPA.
inline optomech::SystemParams decoupled() {
  optomech::SystemParams p;
  p.g = 0.0;
  p.E = 0.0;
  p.lambda_gain = 0.0;
  return p;
}

}  // namespace fixtures
