#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "monorare/engine.hpp"
#include "monorare/errors.hpp"
#include "monorare/minmax.hpp"
#include "monorare/problem.hpp"
#include "test_support.hpp"

using namespace monorare;
using testsupport::comparable_pair;
using testsupport::random_point;

namespace {

// Hand-built single-unit network computing x1 + x2 - 1.
MinMaxNetwork linear_net() {
  MinMaxNetwork net;
  net.dimension = 2;
  net.groups = 1;
  net.units = 1;
  net.weights = {1.0, 1.0};
  net.offsets = {-1.0};
  return net;
}

// Training clouds separated by the diagonal x1 + x2 = 1 with a small gap.
std::pair<std::vector<Point>, std::vector<Point>> separable_clouds(
    int m, SplitMix64& rng) {
  std::vector<Point> fail, safe;
  while (static_cast<int>(fail.size()) < m ||
         static_cast<int>(safe.size()) < m) {
    Point x = random_point(2, rng);
    const double s = x[0] + x[1];
    if (s < 0.98 && static_cast<int>(fail.size()) < m) fail.push_back(x);
    if (s > 1.02 && static_cast<int>(safe.size()) < m) safe.push_back(x);
  }
  return {fail, safe};
}

}  // namespace

TEST_CASE("hand-built network evaluates min over units, max over groups") {
  const MinMaxNetwork net = linear_net();
  CHECK(net.eval({0.5, 0.5}) == doctest::Approx(0.0));
  CHECK(net.eval({0.9, 0.8}) == doctest::Approx(0.7));
  CHECK(net.signature({0.2, 0.2}) == -1);
  CHECK(net.signature({0.5, 0.5}) == -1);  // exact tie counts as failure
  CHECK(net.signature({0.9, 0.9}) == 1);

  MinMaxNetwork two;
  two.dimension = 1;
  two.groups = 2;
  two.units = 2;
  // group 0: min(x - 0.2, 2x - 0.1); group 1: min(x - 0.6, 10x)
  two.weights = {1.0, 2.0, 1.0, 10.0};
  two.offsets = {-0.2, -0.1, -0.6, 0.0};
  // at x = 0.05: group0 = min(-0.15, 0.0) = -0.15; group1 = min(-0.55, 0.5)
  CHECK(two.eval({0.05}) == doctest::Approx(-0.15));
}

TEST_CASE("surrogate volume of the linear net") {
  const MinMaxNetwork net = linear_net();
  const double v = surrogate_volume(net, 1'000'000, 31);
  const double se = std::sqrt(0.5 * 0.5 / 1e6);
  CHECK(std::abs(v - 0.5) < 4 * se);  // triangle below the diagonal

  const double v1 = surrogate_volume(net, 1, 1);
  CHECK((v1 == 0.0 || v1 == 1.0));

  CHECK(surrogate_volume(net, 5000, 9) == surrogate_volume(net, 5000, 9));
  CHECK_THROWS_AS(surrogate_volume(net, 0, 1), std::invalid_argument);
}

TEST_CASE("training on a separable task reaches <= 1% error") {
  SplitMix64 rng(71);
  auto [fail, safe] = separable_clouds(1000, rng);
  TrainOptions opt;
  opt.groups = 2;
  opt.units = 2;
  opt.seed = 5;
  const TrainResult r = train_minmax(fail, safe, opt);
  CHECK(r.train_error <= 0.01);
  CHECK(r.final_loss < r.initial_loss);
  CHECK(r.net.weights_nonnegative());
}

TEST_CASE("trained networks are monotone on comparable pairs") {
  SplitMix64 rng(72);
  auto [fail, safe] = separable_clouds(500, rng);
  TrainOptions opt;
  opt.seed = 6;
  const TrainResult r = train_minmax(fail, safe, opt);
  REQUIRE(r.net.weights_nonnegative());
  int violations = 0;
  for (int i = 0; i < 10'000; ++i) {
    auto [lo, hi] = comparable_pair(2, rng);
    if (r.net.eval(hi) < r.net.eval(lo)) ++violations;
    // the step rule inherits monotonicity
    if (r.net.signature(hi) == -1 && r.net.signature(lo) != -1) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("training rejects empty sides and diverging settings") {
  SplitMix64 rng(73);
  auto [fail, safe] = separable_clouds(50, rng);
  CHECK_THROWS_AS(train_minmax({}, safe, {}), std::invalid_argument);
  CHECK_THROWS_AS(train_minmax(fail, {}, {}), std::invalid_argument);

  TrainOptions bad;
  bad.learning_rate = 1e12;  // blows the parameters up
  bad.iterations = 50;
  CHECK_THROWS_AS(train_minmax(fail, safe, bad), TrainingDiverged);
}

TEST_CASE("surrogate trained on a real run reproduces the frontier band") {
  // Fit on dominated samples of a finished toy d=2 run, then check the
  // cube corners and the held-out consistency rate on both sides.
  MonotoneProblem problem = toy_problem(2, 0.05);
  EngineConfig cfg;
  cfg.n_steps = 400;
  cfg.p_guess = 0.05;
  MrmRun run(problem.evaluator(), 2, cfg, 2024);
  run.initialize();
  for (int k = 0; k < cfg.n_steps; ++k) run.step();

  SplitMix64 rng(74);
  const FrontierPair& frontiers = run.frontiers();
  auto sample_side = [&](Domination side, int m) {
    std::vector<Point> out;
    while (static_cast<int>(out.size()) < m) {
      Point x = random_point(2, rng);
      if (frontiers.classify(x) == side) out.push_back(std::move(x));
    }
    return out;
  };
  const auto fail = sample_side(Domination::FailureDominated, 20'000);
  const auto safe = sample_side(Domination::SafeDominated, 20'000);

  TrainOptions opt;
  opt.seed = 7;
  const TrainResult r = train_minmax(fail, safe, opt);
  CHECK(r.train_error <= 0.0025);

  CHECK(r.net.signature(Point{1e-9, 1e-9}) == -1);  // origin fails
  CHECK(r.net.signature(Point{1.0, 1.0}) == 1);     // top corner is safe

  const auto fail_holdout = sample_side(Domination::FailureDominated, 4000);
  const auto safe_holdout = sample_side(Domination::SafeDominated, 4000);
  int ok_fail = 0, ok_safe = 0;
  for (const Point& x : fail_holdout) {
    if (r.net.signature(x) == -1) ++ok_fail;
  }
  for (const Point& x : safe_holdout) {
    if (r.net.signature(x) == 1) ++ok_safe;
  }
  CHECK(static_cast<double>(ok_fail) / 4000 >= 0.9975);
  CHECK(static_cast<double>(ok_safe) / 4000 >= 0.9975);
}
