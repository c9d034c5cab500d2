#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "monorare/marginal.hpp"
#include "monorare/rng.hpp"

using namespace monorare;

namespace {

const Marginal kAll[] = {
    Marginal::uniform(),
    Marginal::gamma_integer(2),
    Marginal::gamma_integer(5),
    Marginal::gamma_integer(9),
    Marginal::gumbel_truncated(1013.0, 558.0, 10.0, 1e4),
    Marginal::normal_truncated(27.8, 3.0, 0.0),
    Marginal::normal_truncated(0.0, 1.0, -1.0, 2.0),
    Marginal::triangular(53.5, 55.0, 56.5),
};

}  // namespace

TEST_CASE("normal quantile/cdf round-trip") {
  SplitMix64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double u = rng.next_unit();
    CHECK(normal_cdf(normal_quantile(u)) == doctest::Approx(u).epsilon(1e-12));
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

TEST_CASE("closed-form reference values") {
  // Erlang shape 2, scale 1: F(1) = 1 - 2 e^{-1}.
  CHECK(Marginal::gamma_integer(2).cdf(1.0) ==
        doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-14));
  // Triangular(53.5, 55, 56.5): F(55) = (55-53.5)^2 / (3 * 1.5) = 0.5.
  CHECK(Marginal::triangular(53.5, 55.0, 56.5).cdf(55.0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // Uniform on [0,1]: quantile is the identity.
  CHECK(Marginal::uniform().quantile(0.37) == doctest::Approx(0.37));
}

TEST_CASE("quantile(cdf(y)) round-trips within 1e-8") {
  SplitMix64 rng(2);
  for (const Marginal& m : kAll) {
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.next_unit();
      const double y = m.quantile(u);
      CHECK(m.cdf(y) == doctest::Approx(u).epsilon(1e-8));
      const double y2 = m.quantile(m.cdf(y));
      CHECK(y2 == doctest::Approx(y).epsilon(1e-8));
    }
  }
}

TEST_CASE("cdf is monotone and hits the support ends") {
  for (const Marginal& m : kAll) {
    const double lo = m.support_lower();
    const double hi = std::isinf(m.support_upper())
                          ? m.quantile(1.0 - 1e-13)
                          : m.support_upper();
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
      const double y = lo + (hi - lo) * i / 50.0;
      const double c = m.cdf(y);
      CHECK(c >= prev - 1e-12);
      prev = c;
    }
    CHECK(m.cdf(lo) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    if (!std::isinf(m.support_upper())) {
      CHECK(m.cdf(m.support_upper()) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("quantile rejects endpoints") {
  for (const Marginal& m : kAll) {
    CHECK_THROWS_AS(m.quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(m.quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(m.quantile(-0.1), std::domain_error);
  }
}

TEST_CASE("truncation renormalizes") {
  const Marginal g = Marginal::gumbel_truncated(1013.0, 558.0, 10.0, 1e4);
  CHECK(g.cdf(10.0) == 0.0);
  CHECK(g.cdf(1e4) == 1.0);
  const Marginal n = Marginal::normal_truncated(0.0, 1.0, -1.0, 2.0);
  CHECK(n.cdf(-1.0) == 0.0);
  CHECK(n.cdf(2.0) == 1.0);
  CHECK(n.quantile(0.5) < 0.5);  // mass sits below the parent median + tail cut
}
