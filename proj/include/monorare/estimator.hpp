#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "monorare/engine.hpp"
#include "monorare/problem.hpp"
#include "monorare/volume.hpp"

namespace monorare {

/// The per-step triples (p_{k-1}^-, p_{k-1}^+, xi_k) feeding the
/// dependent-Bernoulli likelihood. Every record needs a strictly positive
/// bracket and the overall likelihood bracket
/// (max_k lower_k, min_k upper_k) must be non-empty.
struct LikelihoodData {
  std::vector<double> pre_lower;
  std::vector<double> pre_upper;
  std::vector<int> signatures;

  static LikelihoodData from_trajectory(const Trajectory& traj);

  int size() const { return static_cast<int>(signatures.size()); }
  bool has_failure() const;
  bool has_safe() const;
  /// The open interval (p_{n-1}^-, p_{n-1}^+) containing the interior MLE.
  std::pair<double, double> bracket() const;
  /// Throws if a record bracket is degenerate or the overall bracket empty.
  void validate() const;
};

/// Conditional failure probability of one step (Bayes):
/// (p - lower) / (upper - lower).
double conditional_prob(double p, double pre_lower, double pre_upper);

/// Log-likelihood derivative. In signature-split form
/// sum_{xi=1} 1/(p - lower_k) - sum_{xi=0} 1/(upper_k - p),
/// strictly decreasing on the bracket. p must lie strictly inside it.
double score(double p, const LikelihoodData& data);

/// Empirical Fisher information sum_k 1/((p - lower_k)(upper_k - p)).
double fisher_hat(double p, const LikelihoodData& data);

struct MleResult {
  double p_hat = 0.0;
  /// All signatures equal: p_hat is the corresponding likelihood-bracket
  /// endpoint rather than an interior root.
  bool degenerate = false;
};

/// Unique root of the score by bisection to |bracket| <= tol. Degenerate
/// (single-signature) data yields the flagged boundary value.
MleResult mle(const LikelihoodData& data, double tol = 1e-12);

/// MLE restricted to records start_k..n (1-based).
MleResult windowed_mle(const LikelihoodData& data, int start_k,
                       double tol = 1e-12);

/// Gaussian interval p_hat +- z * fisher_hat(p_hat)^{-1/2}, intersected with
/// the likelihood bracket (the bounds hold with probability one, so the
/// clipped interval can only gain coverage). Requires an interior p_hat.
std::pair<double, double> confidence_interval(double p_hat,
                                              const LikelihoodData& data,
                                              double level);

struct McBaseline {
  double p_hat = 0.0;
  double variance = 0.0;  // plug-in p(1-p)/n
};

/// Plain Monte Carlo estimate with n evaluations of the problem.
McBaseline mc_baseline(const MonotoneProblem& problem, long n,
                       std::uint64_t seed);

/// Everything the harness reports for one run.
struct Estimate {
  double p_hat = 0.0;
  bool degenerate = false;
  double fisher = 0.0;    // \hat{J}_n(p_hat); 0 when degenerate
  double variance = 0.0;  // 1 / fisher; 0 when degenerate
  double ci_lower = 0.0;
  double ci_upper = 1.0;
  double level = 0.95;
  BoundsPair bracket;       // likelihood bracket (p_{n-1}^-, p_{n-1}^+)
  BoundsPair final_bounds;  // bounds after the last step
  double gamma0 = 0.0;      // ((p_0^+ - p_0^-) / p_0^-)^2
  int n = 0;
  long calls_total = 0;
};

Estimate estimate_from_trajectory(const Trajectory& traj, double tol = 1e-12,
                                  double level = 0.95);

}  // namespace monorare
