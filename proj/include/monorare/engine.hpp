#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "monorare/geometry.hpp"
#include "monorare/rng.hpp"
#include "monorare/volume.hpp"

namespace monorare {

using GFunction = std::function<double(const Point&)>;

/// One stochastic step of the sequential scheme: the bounds seen before the
/// draw, the evaluated point with its signature, and the bounds after the
/// frontier update.
struct StepRecord {
  int k = 0;
  double pre_lower = 0.0;
  double pre_upper = 1.0;
  Point point;
  int signature = 0;  // 1{g <= 0}
  double post_lower = 0.0;
  double post_upper = 1.0;
};

/// Full record of one run: the initialization cost plus the ordered step
/// records. This is the sufficient statistic for every estimator.
struct Trajectory {
  int dimension = 0;
  std::uint64_t seed = 0;
  int init_calls = 0;
  std::vector<std::pair<Point, int>> init_points;  // diagonal probes
  std::vector<StepRecord> records;

  /// Bounds after initialization (= pre-bounds of the first record).
  BoundsPair init_bounds() const {
    if (records.empty()) return {0.0, 1.0};
    return {records.front().pre_lower, records.front().pre_upper};
  }
  BoundsPair final_bounds() const {
    if (records.empty()) return {0.0, 1.0};
    return {records.back().post_lower, records.back().post_upper};
  }
  long total_calls() const {
    return init_calls + static_cast<long>(records.size());
  }
};

struct EngineConfig {
  int n_steps = 100;
  double p_guess = 0.01;     // crude prior value of p, sizes the init
  int init_steps = 0;        // 0 = auto: max(k0_min(p_guess, d), 4)
  long max_rejections = 1'000'000;
  VolumePolicy volume_policy;
};

/// Minimal number of diagonal dichotomy steps so that the first failure
/// orthant is resolvable: smallest integer k with
/// k >= 1 + log(1/p) / (d log 2).
int k0_min(double p_guess, int dimension);

/// Sequential MRM run under single ownership. Construct, initialize(), then
/// step() n times (or run() for the whole schedule). Exactly one call to g
/// per stochastic step; bounds recomputed from the frontiers each step under
/// the volume policy (only the side that changed is recomputed).
class MrmRun {
 public:
  MrmRun(GFunction g, int dimension, EngineConfig config, std::uint64_t seed);

  /// Dichotomic diagonal initialization: probe g(t * 1^d) and bisect toward
  /// the sign change. Throws InitFailed if the bounds are still trivial
  /// after the configured number of probes.
  void initialize();

  /// One stochastic step: uniform draw on the non-dominated region, one
  /// evaluation, frontier update, fresh bounds.
  StepRecord step();

  /// initialize() + n_steps step()s.
  Trajectory run();

  const FrontierPair& frontiers() const { return frontiers_; }
  BoundsPair current_bounds() const { return {vol_minus_, 1.0 - vol_plus_}; }
  int init_calls() const { return init_calls_; }
  bool initialized() const { return initialized_; }
  const EngineConfig& config() const { return config_; }

 private:
  void refresh_side(int signature);
  double evaluate(const Point& x);

  GFunction g_;
  int dimension_;
  EngineConfig config_;
  std::uint64_t seed_;
  SplitMix64 rng_;
  FrontierPair frontiers_;
  double vol_minus_ = 0.0;  // Vol(U_n^-)
  double vol_plus_ = 0.0;   // Vol(U_n^+)
  int init_calls_ = 0;
  int steps_done_ = 0;
  bool initialized_ = false;
  std::vector<std::pair<Point, int>> init_points_;
};

/// Uniform draw on the non-dominated region by rejection from the cube.
/// Throws RejectionBudgetExceeded after max_rejections consecutive misses.
Point sample_nondominated(const FrontierPair& frontiers, SplitMix64& rng,
                          long max_rejections = 1'000'000);

/// Convenience wrapper: full deterministic run for a black box.
Trajectory run_mrm(const GFunction& g, int dimension,
                   const EngineConfig& config, std::uint64_t seed);

}  // namespace monorare
