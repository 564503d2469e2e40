#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

/// Invalid parameters, configuration, or call preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a valid result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integration gave up (step size underflow or non-finite state).
class IntegrationFailure : public NumericalError {
 public:
  IntegrationFailure(const std::string& what, double last_good_time)
      : NumericalError(what), last_good_time_(last_good_time) {}

  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// d(Omega) vanishes at the requested pump detuning; first-order coefficients are invalid.
class NearResonanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace optomech
