#include "monorare/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "monorare/errors.hpp"

namespace monorare {

int k0_min(double p_guess, int dimension) {
  if (!(p_guess > 0.0 && p_guess < 1.0)) {
    throw std::invalid_argument("k0_min: p_guess must lie in (0,1)");
  }
  if (dimension < 1) throw std::invalid_argument("k0_min: dimension < 1");
  const double bound = 1.0 + std::log(1.0 / p_guess) /
                                 (static_cast<double>(dimension) * std::log(2.0));
  return static_cast<int>(std::ceil(bound - 1e-12));
}

Point sample_nondominated(const FrontierPair& frontiers, SplitMix64& rng,
                          long max_rejections) {
  const int d = frontiers.dimension();
  Point x(static_cast<std::size_t>(d));
  for (long attempt = 0; attempt < max_rejections; ++attempt) {
    for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = rng.next_unit();
    if (frontiers.classify(x) == Domination::NonDominated) return x;
  }
  throw RejectionBudgetExceeded(
      "sample_nondominated: no non-dominated point after " +
      std::to_string(max_rejections) + " draws");
}

MrmRun::MrmRun(GFunction g, int dimension, EngineConfig config,
               std::uint64_t seed)
    : g_(std::move(g)),
      dimension_(dimension),
      config_(config),
      seed_(seed),
      rng_(SplitMix64::child_seed(seed, 0)),
      frontiers_(dimension) {
  if (config_.n_steps < 1) {
    throw std::invalid_argument("EngineConfig: n_steps must be >= 1");
  }
  if (!(config_.p_guess > 0.0 && config_.p_guess < 1.0)) {
    throw std::invalid_argument("EngineConfig: p_guess must lie in (0,1)");
  }
}

double MrmRun::evaluate(const Point& x) { return g_(x); }

void MrmRun::refresh_side(int signature) {
  // Only the inserted side moved; the other side's frontier is unchanged so
  // its volume is reused as-is.
  const std::uint64_t vol_seed = SplitMix64::child_seed(
      seed_, 0x1000 + static_cast<std::uint64_t>(init_calls_ + steps_done_));
  if (signature == 1) {
    vol_minus_ = side_volume(frontiers_.failure_frontier(), OrthantSide::Lower,
                             dimension_, config_.volume_policy, vol_seed);
  } else {
    vol_plus_ = side_volume(frontiers_.safe_frontier(), OrthantSide::Upper,
                            dimension_, config_.volume_policy, vol_seed);
  }
}

void MrmRun::initialize() {
  if (initialized_) throw std::logic_error("MrmRun: already initialized");
  int steps = config_.init_steps;
  if (steps <= 0) steps = std::max(k0_min(config_.p_guess, dimension_), 4);

  // Bisection along the diagonal {t * 1^d}: a failure probe moves t up
  // toward the sign change, a safe probe moves it down.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < steps; ++i) {
    const double t = 0.5 * (lo + hi);
    Point x(static_cast<std::size_t>(dimension_), t);
    const double value = evaluate(x);
    ++init_calls_;
    const int signature = (value <= 0.0) ? 1 : 0;
    frontiers_.insert(x, signature);
    refresh_side(signature);
    init_points_.emplace_back(std::move(x), signature);
    if (signature == 1) {
      lo = t;
    } else {
      hi = t;
    }
  }

  const BoundsPair b = current_bounds();
  if (!(b.lower > 0.0) || !(b.upper < 1.0)) {
    throw InitFailed("diagonal initialization left trivial bounds (" +
                     std::to_string(b.lower) + ", " + std::to_string(b.upper) +
                     ") after " + std::to_string(steps) + " probes");
  }
  initialized_ = true;
}

StepRecord MrmRun::step() {
  if (!initialized_) throw std::logic_error("MrmRun: initialize() first");
  StepRecord rec;
  rec.k = steps_done_ + 1;
  const BoundsPair pre = current_bounds();
  rec.pre_lower = pre.lower;
  rec.pre_upper = pre.upper;

  rec.point = sample_nondominated(frontiers_, rng_, config_.max_rejections);
  const double value = evaluate(rec.point);
  rec.signature = (value <= 0.0) ? 1 : 0;

  frontiers_.insert(rec.point, rec.signature);
  ++steps_done_;
  refresh_side(rec.signature);

  const BoundsPair post = current_bounds();
  rec.post_lower = post.lower;
  rec.post_upper = post.upper;
  return rec;
}

Trajectory MrmRun::run() {
  initialize();
  Trajectory traj;
  traj.dimension = dimension_;
  traj.seed = seed_;
  traj.records.reserve(static_cast<std::size_t>(config_.n_steps));
  for (int k = 0; k < config_.n_steps; ++k) traj.records.push_back(step());
  traj.init_calls = init_calls_;
  traj.init_points = init_points_;
  return traj;
}

Trajectory run_mrm(const GFunction& g, int dimension, const EngineConfig& config,
                   std::uint64_t seed) {
  MrmRun run(g, dimension, config, seed);
  return run.run();
}

}  // namespace monorare
