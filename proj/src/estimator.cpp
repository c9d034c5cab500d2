#include "monorare/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "monorare/marginal.hpp"
#include "monorare/rng.hpp"

namespace monorare {

LikelihoodData LikelihoodData::from_trajectory(const Trajectory& traj) {
  LikelihoodData data;
  data.pre_lower.reserve(traj.records.size());
  data.pre_upper.reserve(traj.records.size());
  data.signatures.reserve(traj.records.size());
  for (const StepRecord& r : traj.records) {
    data.pre_lower.push_back(r.pre_lower);
    data.pre_upper.push_back(r.pre_upper);
    data.signatures.push_back(r.signature);
  }
  data.validate();
  return data;
}

bool LikelihoodData::has_failure() const {
  return std::find(signatures.begin(), signatures.end(), 1) != signatures.end();
}

bool LikelihoodData::has_safe() const {
  return std::find(signatures.begin(), signatures.end(), 0) != signatures.end();
}

std::pair<double, double> LikelihoodData::bracket() const {
  double lo = 0.0, hi = 1.0;
  for (double v : pre_lower) lo = std::max(lo, v);
  for (double v : pre_upper) hi = std::min(hi, v);
  return {lo, hi};
}

void LikelihoodData::validate() const {
  if (signatures.empty()) {
    throw std::invalid_argument("LikelihoodData: no records");
  }
  if (pre_lower.size() != signatures.size() ||
      pre_upper.size() != signatures.size()) {
    throw std::invalid_argument("LikelihoodData: ragged columns");
  }
  for (std::size_t k = 0; k < signatures.size(); ++k) {
    if (!(pre_lower[k] < pre_upper[k])) {
      throw std::invalid_argument(
          "LikelihoodData: degenerate step bracket at record " +
          std::to_string(k + 1));
    }
    if (signatures[k] != 0 && signatures[k] != 1) {
      throw std::invalid_argument("LikelihoodData: signature must be 0 or 1");
    }
  }
  auto [lo, hi] = bracket();
  if (!(lo < hi)) {
    throw std::invalid_argument("LikelihoodData: empty likelihood bracket");
  }
}

double conditional_prob(double p, double pre_lower, double pre_upper) {
  if (!(pre_lower < pre_upper)) {
    throw std::invalid_argument("conditional_prob: degenerate bracket");
  }
  if (p < pre_lower || p > pre_upper) {
    throw std::domain_error("conditional_prob: p outside [lower, upper]");
  }
  return (p - pre_lower) / (pre_upper - pre_lower);
}

namespace {

void require_interior(double p, const LikelihoodData& data) {
  auto [lo, hi] = data.bracket();
  if (!(p > lo && p < hi)) {
    throw std::domain_error("p outside the open likelihood bracket");
  }
}

}  // namespace

double score(double p, const LikelihoodData& data) {
  require_interior(p, data);
  double s = 0.0;
  for (std::size_t k = 0; k < data.signatures.size(); ++k) {
    if (data.signatures[k] == 1) {
      s += 1.0 / (p - data.pre_lower[k]);
    } else {
      s -= 1.0 / (data.pre_upper[k] - p);
    }
  }
  return s;
}

double fisher_hat(double p, const LikelihoodData& data) {
  require_interior(p, data);
  double j = 0.0;
  for (std::size_t k = 0; k < data.signatures.size(); ++k) {
    j += 1.0 / ((p - data.pre_lower[k]) * (data.pre_upper[k] - p));
  }
  return j;
}

MleResult mle(const LikelihoodData& data, double tol) {
  data.validate();
  auto [lo, hi] = data.bracket();
  if (!data.has_failure()) return {lo, true};
  if (!data.has_safe()) return {hi, true};

  // The score is strictly decreasing with a pole of each sign at the
  // bracket ends, so plain bisection is safe.
  double a = lo, b = hi;
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    const double mid = 0.5 * (a + b);
    if (score(mid, data) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return {0.5 * (a + b), false};
}

MleResult windowed_mle(const LikelihoodData& data, int start_k, double tol) {
  if (start_k < 1 || start_k > data.size()) {
    throw std::invalid_argument("windowed_mle: start_k out of range");
  }
  LikelihoodData window;
  const std::size_t from = static_cast<std::size_t>(start_k - 1);
  window.pre_lower.assign(data.pre_lower.begin() + from, data.pre_lower.end());
  window.pre_upper.assign(data.pre_upper.begin() + from, data.pre_upper.end());
  window.signatures.assign(data.signatures.begin() + from,
                           data.signatures.end());
  return mle(window, tol);
}

std::pair<double, double> confidence_interval(double p_hat,
                                              const LikelihoodData& data,
                                              double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence_interval: level must be in (0,1)");
  }
  const double j = fisher_hat(p_hat, data);  // validates interiority
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z / std::sqrt(j);
  auto [lo, hi] = data.bracket();
  return {std::max(p_hat - half, lo), std::min(p_hat + half, hi)};
}

McBaseline mc_baseline(const MonotoneProblem& problem, long n,
                       std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("mc_baseline: n must be >= 1");
  SplitMix64 rng(seed);
  const int d = problem.dimension();
  Point x(static_cast<std::size_t>(d));
  long failures = 0;
  for (long i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = rng.next_unit();
    if (problem.evaluate(x) <= 0.0) ++failures;
  }
  const double p = static_cast<double>(failures) / static_cast<double>(n);
  return {p, p * (1.0 - p) / static_cast<double>(n)};
}

Estimate estimate_from_trajectory(const Trajectory& traj, double tol,
                                  double level) {
  const LikelihoodData data = LikelihoodData::from_trajectory(traj);
  const auto [lo, hi] = data.bracket();

  Estimate est;
  est.level = level;
  est.bracket = {lo, hi};
  est.final_bounds = traj.final_bounds();
  est.n = data.size();
  est.calls_total = traj.total_calls();

  const BoundsPair b0 = traj.init_bounds();
  est.gamma0 = (b0.lower > 0.0)
                   ? std::pow((b0.upper - b0.lower) / b0.lower, 2.0)
                   : 0.0;

  const MleResult root = mle(data, tol);
  est.p_hat = root.p_hat;
  est.degenerate = root.degenerate;
  if (root.degenerate) {
    // No interior information; report the certain interval itself.
    est.ci_lower = est.final_bounds.lower;
    est.ci_upper = est.final_bounds.upper;
    return est;
  }

  est.fisher = fisher_hat(root.p_hat, data);
  est.variance = 1.0 / est.fisher;
  auto [ci_lo, ci_hi] = confidence_interval(root.p_hat, data, level);
  // The post-run bounds are tighter than the likelihood bracket and equally
  // certain; clip once more.
  est.ci_lower = std::max(ci_lo, est.final_bounds.lower);
  est.ci_upper = std::min(ci_hi, est.final_bounds.upper);
  return est;
}

}  // namespace monorare
