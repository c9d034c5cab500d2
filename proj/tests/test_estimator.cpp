#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "monorare/engine.hpp"
#include "monorare/estimator.hpp"
#include "monorare/problem.hpp"
#include "test_support.hpp"

using namespace monorare;

namespace {

// The two-record worked example used across these tests.
LikelihoodData two_records() {
  LikelihoodData d;
  d.pre_lower = {0.2, 0.3};
  d.pre_upper = {0.8, 0.8};
  d.signatures = {1, 0};
  return d;
}

// Random valid likelihood data: nested brackets with mixed signatures.
LikelihoodData synthetic_data(int n, SplitMix64& rng) {
  LikelihoodData d;
  double lo = 0.01 + 0.1 * rng.next_unit();
  double hi = 0.99 - 0.1 * rng.next_unit();
  for (int k = 0; k < n; ++k) {
    d.pre_lower.push_back(lo);
    d.pre_upper.push_back(hi);
    d.signatures.push_back(static_cast<int>(rng.next_below(2)));
    const double shrink = 0.2 * rng.next_unit() * (hi - lo);
    if (d.signatures.back() == 1) {
      lo += shrink;
    } else {
      hi -= shrink;
    }
  }
  return d;
}

}  // namespace

TEST_CASE("conditional probability formula") {
  CHECK(conditional_prob(0.5, 0.2, 0.8) == doctest::Approx(0.5));
  CHECK(conditional_prob(0.2, 0.2, 0.8) == 0.0);
  CHECK(conditional_prob(0.3, 0.2, 0.8) == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(conditional_prob(0.5, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("score: closed-form root and signs at the poles") {
  const LikelihoodData d = two_records();
  // 1/(p-0.2) = 1/(0.8-p)  =>  p = 0.5
  CHECK(score(0.5, d) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(score(0.31, d) > 0.0);
  CHECK(score(0.79, d) < 0.0);
  CHECK_THROWS_AS(score(0.2, d), std::domain_error);
  CHECK_THROWS_AS(score(0.85, d), std::domain_error);
}

TEST_CASE("score is strictly decreasing on random data") {
  SplitMix64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const LikelihoodData d = synthetic_data(20, rng);
    auto [lo, hi] = d.bracket();
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 20; ++i) {
      const double p = lo + (hi - lo) * i / 21.0;
      const double s = score(p, d);
      CHECK(s < prev);
      prev = s;
    }
  }
}

TEST_CASE("mle: worked example, fixed point, and degenerate data") {
  const LikelihoodData d = two_records();
  const MleResult r = mle(d, 1e-12);
  CHECK_FALSE(r.degenerate);
  CHECK(r.p_hat == doctest::Approx(0.5).epsilon(1e-10));

  // Fixed-point identity: p = sum w_k p_k / sum w_k at the root.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < d.signatures.size(); ++k) {
    const double w =
        1.0 / ((r.p_hat - d.pre_lower[k]) * (d.pre_upper[k] - r.p_hat));
    const double p_k = d.signatures[k] == 1 ? d.pre_upper[k] : d.pre_lower[k];
    num += w * p_k;
    den += w;
  }
  CHECK(std::abs(r.p_hat - num / den) <= 1e-11);

  LikelihoodData all_fail = d;
  all_fail.signatures = {1, 1};
  const MleResult bf = mle(all_fail);
  CHECK(bf.degenerate);
  CHECK(bf.p_hat == doctest::Approx(0.8));  // p_{n-1}^+

  LikelihoodData all_safe = d;
  all_safe.signatures = {0, 0};
  const MleResult bs = mle(all_safe);
  CHECK(bs.degenerate);
  CHECK(bs.p_hat == doctest::Approx(0.3));  // p_{n-1}^-
}

TEST_CASE("mle satisfies the fixed point on random data") {
  SplitMix64 rng(45);
  for (int trial = 0; trial < 30; ++trial) {
    LikelihoodData d = synthetic_data(40, rng);
    if (!d.has_failure() || !d.has_safe()) continue;
    const double tol = 1e-12;
    const MleResult r = mle(d, tol);
    REQUIRE_FALSE(r.degenerate);
    auto [lo, hi] = d.bracket();
    CHECK(r.p_hat > lo);
    CHECK(r.p_hat < hi);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < d.signatures.size(); ++k) {
      const double w =
          1.0 / ((r.p_hat - d.pre_lower[k]) * (d.pre_upper[k] - r.p_hat));
      num += w * (d.signatures[k] == 1 ? d.pre_upper[k] : d.pre_lower[k]);
      den += w;
    }
    CHECK(std::abs(r.p_hat - num / den) <= 10 * tol);
  }
}

TEST_CASE("fisher information: hand arithmetic and the MC floor") {
  const LikelihoodData d = two_records();
  // 1/(0.3*0.3) + 1/(0.2*0.3)
  CHECK(fisher_hat(0.5, d) == doctest::Approx(1.0 / 0.09 + 1.0 / 0.06).epsilon(1e-12));

  LikelihoodData one;
  one.pre_lower = {0.2};
  one.pre_upper = {0.8};
  one.signatures = {1};
  CHECK(fisher_hat(0.5, one) == doctest::Approx(1.0 / 0.09).epsilon(1e-12));

  // Each term is at least 1/(p(1-p)): variance dominates the MC one per run.
  SplitMix64 rng(46);
  for (int trial = 0; trial < 40; ++trial) {
    const LikelihoodData rd = synthetic_data(25, rng);
    auto [lo, hi] = rd.bracket();
    const double p = lo + (hi - lo) * (0.1 + 0.8 * rng.next_unit());
    const double n = static_cast<double>(rd.size());
    CHECK(fisher_hat(p, rd) >= n / (p * (1 - p)) - 1e-9);
  }
}

TEST_CASE("confidence interval: arithmetic and clipping") {
  const LikelihoodData d = two_records();
  const double j = fisher_hat(0.5, d);
  auto [lo, hi] = confidence_interval(0.5, d, 0.95);
  // Unclipped would be 0.5 +- 1.96/sqrt(J) ~ (0.128, 0.872): both ends clip.
  CHECK(lo == doctest::Approx(0.3));
  CHECK(hi == doctest::Approx(0.8));
  CHECK(0.5 - normal_quantile(0.975) / std::sqrt(j) < 0.3);

  // A tiny level collapses the interval onto the estimate.
  auto [l2, h2] = confidence_interval(0.5, d, 1e-10);
  CHECK(l2 == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(h2 == doctest::Approx(0.5).epsilon(1e-8));

  CHECK_THROWS_AS(confidence_interval(0.5, d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(confidence_interval(0.5, d, 1.0), std::invalid_argument);
}

TEST_CASE("windowed mle") {
  const LikelihoodData d = two_records();
  CHECK(windowed_mle(d, 1).p_hat == mle(d).p_hat);  // full window

  const MleResult w2 = windowed_mle(d, 2);  // single record left: degenerate
  CHECK(w2.degenerate);
  CHECK(w2.p_hat == doctest::Approx(0.3));  // that record is safe

  CHECK_THROWS_AS(windowed_mle(d, 0), std::invalid_argument);
  CHECK_THROWS_AS(windowed_mle(d, 3), std::invalid_argument);
}

TEST_CASE("mc baseline") {
  MonotoneProblem problem = toy_problem(2, 0.05);
  const McBaseline mc = mc_baseline(problem, 100'000, 77);
  const double se = std::sqrt(0.05 * 0.95 / 100'000);
  CHECK(std::abs(mc.p_hat - 0.05) < 4 * se);
  CHECK(mc.variance ==
        doctest::Approx(mc.p_hat * (1 - mc.p_hat) / 100'000).epsilon(1e-12));

  // All-failure black box: estimate 1 with zero variance.
  MonotoneProblem fails("always-fails", {Marginal::uniform()}, {1},
                        [](const std::vector<double>&) { return -1.0; }, 0.0,
                        std::nullopt);
  const McBaseline all = mc_baseline(fails, 50, 1);
  CHECK(all.p_hat == 1.0);
  CHECK(all.variance == 0.0);

  // Variance formula at p = 0.05, n = 100.
  CHECK(0.05 * 0.95 / 100 == doctest::Approx(4.75e-4));
}

TEST_CASE("estimate_from_trajectory ties everything together") {
  MonotoneProblem problem = toy_problem(2, 0.05);
  EngineConfig cfg;
  cfg.n_steps = 200;
  cfg.p_guess = 0.05;
  const Trajectory traj = run_mrm(problem.evaluator(), 2, cfg, 3);
  const Estimate est = estimate_from_trajectory(traj, 1e-12, 0.95);

  CHECK_FALSE(est.degenerate);
  CHECK(est.bracket.lower < est.p_hat);
  CHECK(est.p_hat < est.bracket.upper);
  CHECK(est.variance == doctest::Approx(1.0 / est.fisher));
  CHECK(est.variance <= est.p_hat * (1 - est.p_hat) / est.n + 1e-15);
  CHECK(est.n == 200);
  CHECK(est.calls_total == traj.init_calls + 200);
  CHECK(est.ci_lower <= est.ci_upper);
  CHECK(est.gamma0 ==
        doctest::Approx(std::pow(traj.init_bounds().width() /
                                     traj.init_bounds().lower, 2.0)));
}
