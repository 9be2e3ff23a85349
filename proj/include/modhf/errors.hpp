#pragma once

#include <stdexcept>
#include <string>

namespace modhf {

// Invalid wiring between objects (grid mismatch, bad file, bad config key).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Picard iteration failed to contract within max_iter at the current dt.
// Callers are expected to halve dt and retry.
struct StepDiverged : std::runtime_error {
  explicit StepDiverged(const std::string& what) : std::runtime_error(what) {}
};

// The monitored norm exceeded its ceiling, or dt halving was exhausted.
struct BlowUpSuspected : std::runtime_error {
  explicit BlowUpSuspected(const std::string& what) : std::runtime_error(what) {}
};

// Hermite expansion cannot represent the field to the requested residual.
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace modhf
