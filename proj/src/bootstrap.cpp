#include "monorare/bootstrap.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <string>

#include "monorare/errors.hpp"

namespace monorare {

std::vector<Point> sample_dominated(const FrontierPair& frontiers,
                                    Domination side, long count,
                                    SplitMix64& rng, long max_rejections) {
  if (side == Domination::NonDominated) {
    throw std::invalid_argument("sample_dominated: side must be a dominated one");
  }
  std::vector<Point> out;
  if (count <= 0) return out;
  out.reserve(static_cast<std::size_t>(count));
  const int d = frontiers.dimension();
  Point x(static_cast<std::size_t>(d));
  long draws = 0;
  while (static_cast<long>(out.size()) < count) {
    if (++draws > max_rejections) {
      throw RejectionBudgetExceeded(
          "sample_dominated: exceeded " + std::to_string(max_rejections) +
          " draws; the requested side may have near-zero volume");
    }
    for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = rng.next_unit();
    if (frontiers.classify(x) == side) out.push_back(x);
  }
  return out;
}

double corrected_estimate(double p_hat, double bias_hat,
                          const BoundsPair& bounds) {
  return std::clamp(p_hat - bias_hat, bounds.lower, bounds.upper);
}

namespace {

// One surrogate MRM+MLE replicate; retries fresh substreams on degenerate
// signatures (all-equal), counting the retries. InitFailed is not retried:
// the diagonal is deterministic, so a fresh stream cannot change it.
double replicate_estimate(const MinMaxNetwork& net, const EngineConfig& cfg,
                          double tol, std::uint64_t master_seed,
                          std::uint64_t key_base, int max_retries,
                          int* retries_used) {
  const GFunction g = [&net](const Point& x) {
    return static_cast<double>(net.signature(x));
  };
  for (int attempt = 0;; ++attempt) {
    const std::uint64_t seed =
        SplitMix64::child_seed(master_seed, key_base + static_cast<std::uint64_t>(attempt) * 0x10000);
    const Trajectory traj = run_mrm(g, net.dimension, cfg, seed);
    const MleResult r = mle(LikelihoodData::from_trajectory(traj), tol);
    if (!r.degenerate) return r.p_hat;
    if (attempt >= max_retries) {
      throw std::runtime_error(
          "bootstrap replicate stayed degenerate after " +
          std::to_string(max_retries) + " reseeds");
    }
    ++*retries_used;
  }
}

}  // namespace

BootstrapReport bootstrap_bias(const MinMaxNetwork& net,
                               const EngineConfig& engine_config,
                               double estimator_tol, const BootstrapConfig& cfg,
                               std::uint64_t master_seed, double original_p_hat,
                               const BoundsPair& original_bounds) {
  if (cfg.s_replicates < 1) {
    throw std::invalid_argument("bootstrap_bias: S must be >= 1");
  }

  BootstrapReport report;
  report.m_samples = cfg.m_samples;
  report.q_samples = cfg.q_samples;
  report.s_replicates = cfg.s_replicates;
  report.surrogate_p =
      surrogate_volume(net, cfg.q_samples, SplitMix64::child_seed(master_seed, 3));

  report.replicate_estimates.resize(static_cast<std::size_t>(cfg.s_replicates));
  const int jobs = std::max(1, cfg.jobs);
  std::vector<int> retries(static_cast<std::size_t>(jobs), 0);
  auto worker = [&](int job) {
    for (int i = job; i < cfg.s_replicates; i += jobs) {
      report.replicate_estimates[static_cast<std::size_t>(i)] =
          replicate_estimate(net, engine_config, estimator_tol, master_seed,
                             0x100000 + static_cast<std::uint64_t>(i),
                             cfg.max_degenerate_retries,
                             &retries[static_cast<std::size_t>(job)]);
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::future<void>> futs;
    futs.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) {
      futs.push_back(std::async(std::launch::async, worker, j));
    }
    for (auto& f : futs) f.get();
  }
  for (int r : retries) report.degenerate_retries += r;

  double sum = 0.0;
  for (double v : report.replicate_estimates) sum += v;
  report.bias_hat =
      sum / static_cast<double>(cfg.s_replicates) - report.surrogate_p;
  report.corrected_p =
      corrected_estimate(original_p_hat, report.bias_hat, original_bounds);
  return report;
}

BootstrapReport run_bootstrap(const FrontierPair& frontiers,
                              const EngineConfig& engine_config,
                              double estimator_tol, const BootstrapConfig& cfg,
                              std::uint64_t master_seed,
                              const Estimate& original) {
  SplitMix64 rng_minus(SplitMix64::child_seed(master_seed, 1));
  SplitMix64 rng_plus(SplitMix64::child_seed(master_seed, 2));
  const std::vector<Point> fail_pts = sample_dominated(
      frontiers, Domination::FailureDominated, cfg.m_samples, rng_minus);
  const std::vector<Point> safe_pts = sample_dominated(
      frontiers, Domination::SafeDominated, cfg.m_samples, rng_plus);

  TrainOptions topt = cfg.train;
  topt.seed = SplitMix64::child_seed(master_seed, 4);
  const TrainResult trained = train_minmax(fail_pts, safe_pts, topt);

  BootstrapReport report =
      bootstrap_bias(trained.net, engine_config, estimator_tol, cfg,
                     master_seed, original.p_hat, original.final_bounds);
  report.train_error = trained.train_error;
  return report;
}

}  // namespace monorare
