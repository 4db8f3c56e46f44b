#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "uirisk/distribution.hpp"
#include "uirisk/random.hpp"

using namespace uirisk;

namespace {

const DiscreteDistribution kA1({-1.0, 6.0}, {11.0 / 12.0, 1.0 / 12.0});

}  // namespace

TEST_CASE("construction sorts, merges and renormalizes") {
  const DiscreteDistribution x({3.0, 1.0, 3.0 + 1e-13, 2.0}, {0.25, 0.25, 0.25, 0.25});
  REQUIRE(x.size() == 3);
  CHECK(x.atoms()[0] == 1.0);
  CHECK(x.atoms()[2] == doctest::Approx(3.0));
  CHECK(x.weights()[2] == doctest::Approx(0.5));
  CHECK(x.cumulative().back() == 1.0);
  CHECK(x.upper_tail()[0] == 1.0);
  CHECK(x.upper_tail()[3] == 0.0);
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(DiscreteDistribution({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({1.0, 2.0}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({1.0, 2.0}, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({1.0, 2.0}, {1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({NAN}, {1.0}), std::invalid_argument);
}

TEST_CASE("from_samples counts relative frequencies") {
  const std::vector<double> s{1.0, 1.0, 3.0};
  const auto x = from_samples(s);
  REQUIRE(x.size() == 2);
  CHECK(x.weights()[0] == doctest::Approx(2.0 / 3.0));
  CHECK(x.weights()[1] == doctest::Approx(1.0 / 3.0));

  const auto single = from_samples(std::vector<double>{5.0});
  CHECK(single.size() == 1);
  CHECK(single.weights()[0] == 1.0);

  CHECK_THROWS_WITH(from_samples(std::vector<double>{}), "empty sample");
  CHECK_THROWS_WITH(from_samples(std::vector<double>{1.0, INFINITY}), "non-finite sample");
}

TEST_CASE("from_samples on Bernoulli draws concentrates") {
  auto rng = make_rng(11, "tests.dist_core.bernoulli");
  std::vector<double> s(10000);
  for (double& v : s) v = uniform01(rng) < 0.25 ? 1.0 : 0.0;
  const auto x = from_samples(s);
  CHECK(std::abs(x.weights()[1] - 0.25) < 0.02);
}

TEST_CASE("var is the left-continuous inverse") {
  const auto u = DiscreteDistribution::uniform_over(std::vector<double>{1, 2, 3, 4});
  CHECK(var(u, 0.5) == 2.0);
  CHECK(var(u, 0.5000001) == 3.0);
  CHECK(var(u, 0.25) == 1.0);
  CHECK(var(DiscreteDistribution::point_mass(2.5), 0.3) == 2.5);
  CHECK(var(kA1, 0.95) == 6.0);
  CHECK(var(kA1, 11.0 / 12.0) == -1.0);
  CHECK_THROWS_WITH(var(u, 0.0), "level out of range");
  CHECK_THROWS_WITH(var(u, 1.0), "level out of range");
}

TEST_CASE("var is monotone and integrates to the mean") {
  auto rng = make_rng(3, "tests.dist_core.var");
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = testing::random_law(rng, 7);
    double previous = -INFINITY;
    for (int i = 1; i < 200; ++i) {
      const double v = var(x, i / 200.0);
      CHECK(v >= previous);
      previous = v;
    }
    CHECK(x.quantile().integral(0.0, 1.0) == doctest::Approx(mean(x)).epsilon(1e-12));
  }
}

TEST_CASE("fold, negate and truncate") {
  const auto sym = fold(DiscreteDistribution({-1.0, 1.0}, {0.5, 0.5}));
  REQUIRE(sym.size() == 1);
  CHECK(sym.atoms()[0] == 1.0);

  const auto f = fold(DiscreteDistribution({-2.0, 0.0, 3.0}, {0.2, 0.3, 0.5}));
  REQUIRE(f.size() == 3);
  CHECK(f.atoms()[0] == 0.0);
  CHECK(f.atoms()[1] == 2.0);
  CHECK(f.weights()[0] == doctest::Approx(0.3));
  CHECK(f.weights()[1] == doctest::Approx(0.2));

  const auto n = negate(kA1);
  CHECK(n.atoms()[0] == -6.0);
  CHECK(n.weights()[0] == doctest::Approx(1.0 / 12.0));

  const auto t = truncate(DiscreteDistribution::uniform_over(std::vector<double>{1, 5, 9}), 5.0);
  REQUIRE(t.size() == 2);
  CHECK(t.atoms()[1] == 5.0);
  CHECK(t.weights()[1] == doctest::Approx(2.0 / 3.0));

  CHECK(mean(kA1) == doctest::Approx(-5.0 / 12.0));
}

TEST_CASE("fold is idempotent and transforms keep unit mass") {
  auto rng = make_rng(5, "tests.dist_core.fold");
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = testing::random_law(rng, 6);
    CHECK(fold(fold(x)) == fold(x));
    CHECK(fold(x).cumulative().back() == 1.0);
    CHECK(negate(x).cumulative().back() == 1.0);
    CHECK(mean(negate(x)) == doctest::Approx(-mean(x)));
  }
}

TEST_CASE("mix and shift") {
  const std::vector<DiscreteDistribution> xs{DiscreteDistribution::point_mass(0.0),
                                             DiscreteDistribution::point_mass(1.0)};
  const std::vector<double> ws{0.75, 0.25};
  const auto m = mix(xs, ws);
  CHECK(m.weights()[1] == doctest::Approx(0.25));
  CHECK_THROWS_AS(mix(xs, std::vector<double>{1.0}), std::invalid_argument);
  CHECK(mean(shift(kA1, 2.0)) == doctest::Approx(mean(kA1) + 2.0));
  CHECK(mean(scale(kA1, -3.0)) == doctest::Approx(-3.0 * mean(kA1)));
}

TEST_CASE("families index from one and truncate") {
  const DistributionFamily g(
      "nb", [](std::size_t n) { return DiscreteDistribution::bernoulli(1.0 / n, static_cast<double>(n)); }, 100);
  CHECK(g.horizon() == 100);
  CHECK(mean(g.member(7)) == doctest::Approx(1.0));
  CHECK_THROWS(g.member(0));
  CHECK_THROWS(g.member(101));
  CHECK(g.truncated(10).horizon() == 10);

  const DistributionFamily list("two", {kA1, negate(kA1)});
  CHECK(list.member(2) == negate(kA1));
  CHECK(list.truncated(1).horizon() == 1);
}
