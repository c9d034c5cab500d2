#include <doctest.h>

#include <stdexcept>

#include "monorare/errors.hpp"
#include "monorare/geometry.hpp"
#include "test_support.hpp"

using namespace monorare;
using testsupport::comparable_pair;
using testsupport::random_point;

TEST_CASE("dominates: coordinatewise comparison") {
  CHECK(dominates({0.5, 0.5}, {0.2, 0.3}));
  CHECK_FALSE(dominates({0.5, 0.2}, {0.2, 0.3}));
  CHECK_FALSE(dominates({0.2, 0.3}, {0.5, 0.2}));
  const Point x{0.4, 0.7, 0.1};
  CHECK(dominates(x, x));  // reflexive
  CHECK_THROWS_AS(dominates({0.1, 0.2}, {0.1, 0.2, 0.3}), std::invalid_argument);
}

TEST_CASE("dominates: partial-order laws on random triples") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Point a = random_point(3, rng);
    const Point b = random_point(3, rng);
    const Point c = random_point(3, rng);
    CHECK(dominates(a, a));
    if (dominates(a, b) && dominates(b, a)) CHECK(a == b);  // antisymmetry
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
  }
}

TEST_CASE("classify against the two frontiers") {
  FrontierPair f(2);
  f.insert({0.5, 0.5}, 1);
  f.insert({0.8, 0.8}, 0);
  CHECK(f.classify({0.1, 0.1}) == Domination::FailureDominated);
  CHECK(f.classify({0.9, 0.9}) == Domination::SafeDominated);
  CHECK(f.classify({0.9, 0.1}) == Domination::NonDominated);
  CHECK_THROWS_AS(f.classify({0.1, 0.1, 0.1}), std::invalid_argument);
}

TEST_CASE("classify: empty frontiers leave everything non-dominated") {
  FrontierPair f(4);
  SplitMix64 rng(5);
  for (int i = 0; i < 20; ++i) {
    CHECK(f.classify(random_point(4, rng)) == Domination::NonDominated);
  }
}

TEST_CASE("insert keeps antichains and prunes covered vertices") {
  FrontierPair f(2);
  f.insert({0.5, 0.5}, 1);
  f.insert({0.8, 0.3}, 1);  // incomparable points coexist
  CHECK(f.failure_frontier().size() == 2);

  f.insert({0.6, 0.6}, 1);  // covers (0.5, 0.5)
  CHECK(f.failure_frontier().size() == 2);
  for (const Point& p : f.failure_frontier()) CHECK(p != Point{0.5, 0.5});

  FrontierPair s(2);
  s.insert({0.8, 0.8}, 0);
  s.insert({0.7, 0.7}, 0);  // (0.8,0.8) dominates it and gets pruned
  CHECK(s.safe_frontier() == std::vector<Point>{{0.7, 0.7}});
}

TEST_CASE("insert flags separability violations") {
  FrontierPair f(2);
  f.insert({0.3, 0.3}, 0);
  CHECK_THROWS_AS(f.insert({0.5, 0.5}, 1), SeparabilityViolation);
  FrontierPair g(2);
  g.insert({0.5, 0.5}, 1);
  CHECK_THROWS_AS(g.insert({0.3, 0.3}, 0), SeparabilityViolation);
}

TEST_CASE("random insert sequences preserve the antichain invariant") {
  SplitMix64 rng(99);
  for (int d : {2, 3, 5}) {
    FrontierPair f(d);
    // Separable ground truth: failure iff sum of coords <= d * 0.4.
    const double cut = 0.4 * d;
    for (int i = 0; i < 300; ++i) {
      const Point x = random_point(d, rng);
      double s = 0.0;
      for (double c : x) s += c;
      const int sig = (s <= cut) ? 1 : 0;
      if (f.classify(x) != Domination::NonDominated) continue;
      f.insert(x, sig);
    }
    for (const auto& side : {f.failure_frontier(), f.safe_frontier()}) {
      for (std::size_t i = 0; i < side.size(); ++i) {
        for (std::size_t j = 0; j < side.size(); ++j) {
          if (i == j) continue;
          CHECK_FALSE(dominates(side[i], side[j]));
        }
      }
    }
    // no failure vertex dominates a safe vertex
    for (const Point& a : f.failure_frontier()) {
      for (const Point& b : f.safe_frontier()) {
        CHECK_FALSE(dominates(a, b));
      }
    }
  }
}

TEST_CASE("classification respects the partial order") {
  SplitMix64 rng(123);
  FrontierPair f(3);
  f.insert({0.45, 0.55, 0.5}, 1);
  f.insert({0.52, 0.61, 0.58}, 0);
  for (int i = 0; i < 500; ++i) {
    auto [lo, hi] = comparable_pair(3, rng);
    if (f.classify(hi) == Domination::FailureDominated) {
      CHECK(f.classify(lo) == Domination::FailureDominated);
    }
    if (f.classify(lo) == Domination::SafeDominated) {
      CHECK(f.classify(hi) == Domination::SafeDominated);
    }
  }
}
