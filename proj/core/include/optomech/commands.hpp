#pragma once

#include <optional>
#include <string>

#include "optomech/config.hpp"

namespace optomech {

struct RunOptions {
  unsigned threads = 0;            // 0 = hardware concurrency
  std::optional<long long> seed;   // recorded only; the model is deterministic
};

struct RunOutput {
  std::string data;      // CSV or JSON, per config.format
  std::string metadata;  // JSON sidecar
};

/// Executes one command. ConfigError for invalid input, NumericalError (and
/// its subclasses) for numerical failure.
RunOutput run_command(Command cmd, const RunConfig& config, const RunOptions& options = {});

}  // namespace optomech
