#pragma once

#include <cstdint>
#include <vector>

#include "monorare/engine.hpp"
#include "monorare/estimator.hpp"
#include "monorare/geometry.hpp"
#include "monorare/minmax.hpp"

namespace monorare {

/// Uniform draws on one dominated subspace (cube rejection keeping the
/// points the frontiers classify to the requested side).
std::vector<Point> sample_dominated(const FrontierPair& frontiers,
                                    Domination side, long count,
                                    SplitMix64& rng,
                                    long max_rejections = 100'000'000);

struct BootstrapConfig {
  long m_samples = 100'000;    // training points per dominated side
  long q_samples = 1'000'000;  // MC volume of the replicated surface
  int s_replicates = 1'000;    // surrogate MLE replicates
  TrainOptions train;
  int max_degenerate_retries = 100;
  int jobs = 1;  // replicate evaluation threads
};

struct BootstrapReport {
  double surrogate_p = 0.0;  // MC volume under the replicated surface
  std::vector<double> replicate_estimates;
  double bias_hat = 0.0;     // mean(replicates) - surrogate_p
  double corrected_p = 0.0;  // p_hat - bias_hat, clipped to the run's bounds
  long m_samples = 0;
  long q_samples = 0;
  int s_replicates = 0;
  double train_error = 0.0;
  int degenerate_retries = 0;
};

/// Bias correction clipped to the certain interval.
double corrected_estimate(double p_hat, double bias_hat,
                          const BoundsPair& bounds);

/// Steps 4-5 of the bootstrap: estimate the surrogate volume, then run S
/// independent MRM+MLE pipelines against the trained surrogate (same engine
/// schedule as the original run, initialization redone on the surrogate).
/// Replicates that come back degenerate are rerun on a fresh substream, up
/// to the configured cap. Deterministic given master_seed.
BootstrapReport bootstrap_bias(const MinMaxNetwork& net,
                               const EngineConfig& engine_config,
                               double estimator_tol, const BootstrapConfig& cfg,
                               std::uint64_t master_seed, double original_p_hat,
                               const BoundsPair& original_bounds);

/// The whole five-step pipeline applied after a completed run: sample both
/// dominated subspaces, train the surrogate, then bootstrap_bias.
BootstrapReport run_bootstrap(const FrontierPair& frontiers,
                              const EngineConfig& engine_config,
                              double estimator_tol, const BootstrapConfig& cfg,
                              std::uint64_t master_seed,
                              const Estimate& original);

}  // namespace monorare
