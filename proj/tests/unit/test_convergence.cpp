#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "oracles.hpp"
#include "uirisk/convergence.hpp"

using namespace uirisk;

TEST_CASE("w1 examples") {
  CHECK(w1(DiscreteDistribution::point_mass(0.0), DiscreteDistribution::point_mass(1.0)) == doctest::Approx(1.0));
  CHECK(w1(DiscreteDistribution::uniform_over(std::vector<double>{0.0, 1.0}), DiscreteDistribution::point_mass(0.5)) ==
        doctest::Approx(0.5));
}

TEST_CASE("w1 matches the CDF formula and the transport LP") {
  auto rng = make_rng(31, "tests.convergence.w1");
  for (int i = 0; i < 100; ++i) {
    const auto a = testing::random_law(rng, 6);
    const auto b = testing::random_law(rng, 6);
    const double w = w1(a, b);
    CHECK(std::abs(w - oracle::w1_cdf(testing::law_of(a), testing::law_of(b))) < 1e-10);
    CHECK(std::abs(w - oracle::lp_transport(testing::law_of(a), testing::law_of(b))) < 1e-10);
    CHECK(w >= std::abs(mean(a) - mean(b)) - 1e-12);
  }
}

TEST_CASE("w1 metric axioms") {
  auto rng = make_rng(32, "tests.convergence.metric");
  for (int i = 0; i < 300; ++i) {
    const auto a = testing::random_law(rng, 6);
    const auto b = testing::random_law(rng, 6);
    const auto c = testing::random_law(rng, 6);
    CHECK(w1(a, b) == w1(b, a));
    CHECK(w1(a, a) == 0.0);
    CHECK(w1(a, c) <= w1(a, b) + w1(b, c) + 1e-12);
  }
}

TEST_CASE("comonotone coupling on a grid") {
  const DiscreteDistribution f({-1.0, 0.5, 2.0}, {0.2, 0.5, 0.3});
  const auto same = comonotone_version(f, f, 100);
  CHECK(same.grid_distance == 0.0);
  CHECK(same.x_star == same.x);
  const auto shifted = comonotone_version(shift(f, 0.75), f, 100);
  CHECK(shifted.grid_distance == doctest::Approx(0.75));

  // Empirical 100-sample of a quadrature law: grid distance within 2/m of w1.
  std::vector<double> nodes;
  for (int i = 0; i < 41; ++i) nodes.push_back(-2.0 + 0.1 * i);
  std::vector<double> weights;
  for (double x : nodes) weights.push_back(std::exp(-0.5 * x * x));
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  const DiscreteDistribution normal(nodes, weights);
  const auto q = normal.quantile();
  auto rng = make_rng(33, "tests.convergence.coupling");
  std::vector<double> draws(100);
  for (double& d : draws) d = q(uniform01_open_left(rng));
  const auto emp = from_samples(draws);
  const std::size_t m = 1000;
  const auto c = comonotone_version(emp, normal, m);
  CHECK(std::abs(c.grid_distance - c.w1) <= 2.0 / m);
  CHECK_THROWS_AS(comonotone_version(emp, normal, 0), std::invalid_argument);
}

TEST_CASE("quantile average is the w1 midpoint") {
  const auto a = DiscreteDistribution::point_mass(0.0);
  const auto b = DiscreteDistribution::point_mass(2.0);
  const auto mid = quantile_average({a, b});
  CHECK(w1(mid, a) == doctest::Approx(1.0));
  CHECK(w1(mid, b) == doctest::Approx(1.0));
}

TEST_CASE("sample generators") {
  CHECK(SampleGenerator::parse("coin").name() == "coin");
  CHECK(SampleGenerator::parse("pareto:1.5").name() == "pareto:1.5");
  CHECK_THROWS_AS(SampleGenerator::parse("pareto:1"), std::invalid_argument);
  CHECK_THROWS_AS(SampleGenerator::parse("normal"), std::invalid_argument);
  auto rng = make_rng(1, "tests.convergence.gen");
  const auto p = SampleGenerator::pareto(3.0);
  for (int i = 0; i < 1000; ++i) CHECK(std::abs(p.draw(rng)) >= 1.0);
}

TEST_CASE("LLN experiment") {
  const auto ies = RiskMeasure::distortion(DistortionFunction::ies());
  LlnConfig coin;
  coin.n_max = 4096;
  coin.reps = 100;
  const auto r = lln_experiment(coin, ies, ies);
  REQUIRE_FALSE(r.rows.empty());
  CHECK(r.rows.back().n == 4096);
  CHECK(r.rows.back().exceedance[1] < 0.05);
  CHECK_FALSE(r.hypothesis_violated);
  // Exceedance decreases along the schedule up to Monte Carlo noise.
  const double noise = 3.0 / std::sqrt(static_cast<double>(coin.reps));
  for (std::size_t i = 6; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].exceedance[0] <= r.rows[i - 1].exceedance[0] + noise);
  }

  LlnConfig zero = coin;
  zero.generator = SampleGenerator::zero();
  for (const auto& row : lln_experiment(zero, ies, ies).rows) CHECK(row.exceedance[0] == 0.0);

  LlnConfig pareto = coin;
  pareto.generator = SampleGenerator::pareto(1.5);
  const auto heavy = lln_experiment(pareto, ies, ies);
  CHECK(heavy.rows.back().exceedance[0] < heavy.rows[3].exceedance[0]);

  // Deterministic for a fixed seed.
  CHECK(lln_experiment(coin, ies, ies).rows.back().exceedance == r.rows.back().exceedance);

  CHECK_THROWS_AS(lln_experiment(coin, RiskMeasure::expected_shortfall(0.9), ies), std::invalid_argument);
}

TEST_CASE("ES convergence") {
  const DiscreteDistribution f({-1.0, 0.0, 2.0}, {0.3, 0.4, 0.3});
  std::vector<DiscreteDistribution> shifted;
  for (int n = 1; n <= 50; ++n) shifted.push_back(shift(f, 1.0 / n));
  const auto r = es_convergence_experiment(shifted, f, {0.5, 0.9, 0.99});
  REQUIRE(r.rows.size() == 150);
  for (const auto& row : r.rows) CHECK(row.error == doctest::Approx(1.0 / row.n).epsilon(1e-12));
  for (const auto& t : r.trends) {
    CHECK(t.log_log_slope == doctest::Approx(-1.0));
    CHECK(t.monotone_fraction == 1.0);
  }

  const auto same = es_convergence_experiment(std::vector<DiscreteDistribution>(5, f), f, {0.5});
  for (const auto& row : same.rows) CHECK(row.error == 0.0);
  CHECK(std::isnan(same.trends[0].log_log_slope));

  // Empirical samples: the error shrinks.
  const auto q = f.quantile();
  auto rng = make_rng(34, "tests.convergence.es");
  std::vector<DiscreteDistribution> emp;
  std::vector<double> draws;
  for (int n = 1; n <= 2000; ++n) {
    draws.push_back(q(uniform01_open_left(rng)));
    emp.push_back(from_samples(draws));
  }
  const auto e = es_convergence_experiment(emp, f, {0.5});
  CHECK(e.rows.back().error < 0.1);
  CHECK(e.trends[0].log_log_slope < 0.0);
}

TEST_CASE("subsequence extraction") {
  const auto a = DiscreteDistribution::uniform_over(std::vector<double>{0.0, 1.0});
  const auto b = DiscreteDistribution::point_mass(3.0);
  const DistributionFamily ab("ab", [&](std::size_t n) { return n % 2 == 1 ? a : b; }, 257);
  const auto r = subsequence_extract(ab);
  CHECK(r.indices.size() >= 3);
  for (std::size_t n : r.indices) CHECK(n % 2 == 1);
  CHECK(w1(r.candidate, a) < 1e-12);

  const DistributionFamily alt(
      "alt", [](std::size_t n) { return DiscreteDistribution::point_mass(n % 2 == 0 ? 1.0 : -1.0); }, 256);
  const auto s = subsequence_extract(alt);
  for (std::size_t n : s.indices) CHECK(n % 2 == 0);
  CHECK(w1(s.candidate, DiscreteDistribution::point_mass(1.0)) < 1e-12);
  for (std::size_t k = 1; k < s.indices.size(); ++k) CHECK(s.indices[k] > s.indices[k - 1]);

  // Empirical n-samples of one law: the candidate is near the law.
  const DiscreteDistribution f({-1.0, 0.0, 2.0}, {0.3, 0.4, 0.3});
  const auto q = f.quantile();
  const DistributionFamily emp(
      "emp",
      [&](std::size_t n) {
        auto rng = make_rng(35, "tests.convergence.subseq", n);
        std::vector<double> d(n * 10);
        for (double& v : d) v = q(uniform01_open_left(rng));
        return from_samples(d);
      },
      400);
  const auto e = subsequence_extract(emp, 4);
  CHECK(w1(e.candidate, f) < 0.1);

  const DistributionFamily tiny("tiny", {a, b});
  CHECK_THROWS_WITH(subsequence_extract(tiny), "inconclusive at horizon");
}
