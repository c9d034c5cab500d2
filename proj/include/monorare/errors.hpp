#pragma once

#include <stdexcept>
#include <string>

namespace monorare {

/// A point turned out to be dominated by both frontiers at once, which is
/// impossible for a monotone limit state. The supplied black box is either
/// non-monotone or non-deterministic.
class SeparabilityViolation : public std::runtime_error {
 public:
  explicit SeparabilityViolation(const std::string& what)
      : std::runtime_error(what) {}
};

/// Rejection sampling exhausted its draw budget before hitting the
/// non-dominated region.
class RejectionBudgetExceeded : public std::runtime_error {
 public:
  explicit RejectionBudgetExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

/// Deterministic initialization finished with trivial bounds (lower still 0
/// or upper still 1); the diagonal never crossed the limit state within the
/// configured number of probes.
class InitFailed : public std::runtime_error {
 public:
  explicit InitFailed(const std::string& what) : std::runtime_error(what) {}
};

/// Surrogate training loss failed to decrease or became non-finite.
class TrainingDiverged : public std::runtime_error {
 public:
  explicit TrainingDiverged(const std::string& what)
      : std::runtime_error(what) {}
};

/// Malformed harness configuration (missing seed, bad field types, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace monorare
