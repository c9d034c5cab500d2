#pragma once

#include <cstdint>

namespace monorare {

/// SplitMix64 generator (Steele, Lea & Flood 2014). Chosen as the project-wide
/// generator because the whole stream is a pure function of the 64-bit seed:
/// output i equals mix64(seed + (i+1)*GAMMA), so streams can be reproduced
/// bit-exactly in any language from the two constants below.
///
/// All randomness in the library flows through this class; substreams are
/// derived with child_seed() so that replications, bootstrap replicates and
/// per-step Monte Carlo volume calls never share a stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform double in the open interval (0,1): 53 random bits shifted off
  /// the endpoints. Quantile transforms rely on never seeing exact 0 or 1.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  /// Deterministic substream derivation: domain-separated from the parent
  /// stream by an initial xor-mix, then keyed. child_seed(s, k) never
  /// collides with the parent's own outputs for practical purposes.
  static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t key) {
    return mix64(mix64(seed ^ 0x6C62272E07BB0142ULL) + (key + 1) * kGamma);
  }

  SplitMix64 child(std::uint64_t key) const {
    return SplitMix64(child_seed(state_, key));
  }

 private:
  std::uint64_t state_;
};

}  // namespace monorare
