#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "uirisk/folding.hpp"
#include "uirisk/ui_diag.hpp"

using namespace uirisk;

namespace {

DistributionFamily nbernoulli(std::size_t horizon) {
  return DistributionFamily(
      "nbernoulli",
      [](std::size_t n) { return DiscreteDistribution::bernoulli(1.0 / n, static_cast<double>(n)); }, horizon);
}

DistributionFamily single() {
  return DistributionFamily("single", {DiscreteDistribution({-2.0, 0.0, 3.0}, {0.3, 0.4, 0.3})});
}

DistributionFamily bounded(std::size_t horizon) {
  return DistributionFamily(
      "bounded",
      [](std::size_t n) {
        const double c = std::sin(static_cast<double>(n));
        return DiscreteDistribution::uniform_over(std::vector<double>{-1.0, c, 2.0 * c});
      },
      horizon);
}

DistributionFamily half_coin() { return DistributionFamily("coin", {DiscreteDistribution::bernoulli(0.5)}); }

}  // namespace

TEST_CASE("grids") {
  const auto g = dyadic_grid(3);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 0.5);
  CHECK(g[2] == 0.875);
  CHECK(parse_grid("dyadic:20").size() == 20);
  CHECK(parse_grid("0.5,0.9,0.99").size() == 3);
  CHECK_THROWS_AS(parse_grid("0.9,0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("dyadic:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("banana"), std::invalid_argument);
  CHECK(to_string(Verdict::not_ui) == "not-UI");
}

TEST_CASE("n Bernoulli(1/n) envelope is one where every member fits") {
  const auto r = tail_envelope(nbernoulli(10000), dyadic_grid(13));
  for (const auto& e : r.envelope) CHECK(e.env_abs == doctest::Approx(1.0));
  CHECK(r.verdict == Verdict::not_ui);
  CHECK(r.crosscheck_ok);
  CHECK_FALSE(r.construction.has_value());
}

TEST_CASE("single and bounded families are UI") {
  const auto s = tail_envelope(single(), dyadic_grid(20));
  CHECK(s.verdict == Verdict::ui);
  REQUIRE(s.construction.has_value());
  CHECK(s.construction->attained_sup <= s.construction->certified_bound);

  const auto b = tail_envelope(bounded(200), dyadic_grid(20));
  CHECK(b.verdict == Verdict::ui);
  for (const auto& e : b.envelope) CHECK(e.env_abs <= 2.0 * (1.0 - e.p) + 1e-12);
}

TEST_CASE("distortion construction on a fair coin") {
  const auto d = dvp_distortion(half_coin());
  CHECK(d.g_one == doctest::Approx(0.5));
  CHECK(d.h(0.5) == doctest::Approx(1.0));
  REQUIRE(d.levels.size() == static_cast<std::size_t>(kDvpTerms));
  for (std::size_t n = 0; n < d.levels.size(); ++n) {
    CHECK(1.0 - d.levels[n] == doctest::Approx(std::ldexp(1.0, -static_cast<int>(n) - 2)));
  }
  CHECK(d.certified_bound == doctest::Approx(2.0));
  CHECK(d.attained_sup <= 2.0);
  CHECK(d.h.is_concave());
  CHECK(is_Dc(d.h));
  CHECK(slope_limit(d.h).is_positive_infinity());
}

TEST_CASE("distortion construction bound holds on its family") {
  for (const auto& fam : {single(), bounded(300)}) {
    const auto d = dvp_distortion(fam);
    double sup = 0.0;
    for (std::size_t n = 1; n <= fam.horizon(); ++n) sup = std::max(sup, choquet(d.h, fold(fam.member(n))));
    CHECK(sup <= 1.0 / d.g_one);
    CHECK(sup == doctest::Approx(d.attained_sup));
  }
}

TEST_CASE("growth monitor") {
  const auto log_growth = monitor_growth(1 << 14, [](std::size_t n) { return 1.0 + std::log(double(n)); });
  CHECK(log_growth.verdict == Verdict::not_ui);
  const auto settles = monitor_growth(1 << 14, [](std::size_t n) { return 2.0 - 1.0 / double(n); });
  CHECK(settles.verdict == Verdict::ui);
  const auto huge = monitor_growth(8, [](std::size_t n) { return n == 5 ? 1e7 : 1.0; });
  CHECK(huge.verdict == Verdict::not_ui);
}

TEST_CASE("UI via a test distortion") {
  const auto ies = DistortionFunction::ies();
  const auto nb = ui_from_distortion(nbernoulli(10000), ies);
  CHECK(nb.verdict == Verdict::not_ui);
  for (const auto& [n, v] : nb.checkpoints) {
    CHECK(v == doctest::Approx(1.0 + std::log(static_cast<double>(n))).epsilon(1e-12));
  }
  CHECK(ui_from_distortion(half_coin(), ies).verdict == Verdict::ui);
  CHECK_THROWS_WITH(ui_from_distortion(half_coin(), DistortionFunction::es_clip(0.9)),
                    "test distortion is expectation-dominated");
}

TEST_CASE("one-sided pair test") {
  const auto g = DistortionFunction::ies();
  const auto f = DistortionFunction::power(0.5);
  const DistributionFamily periodic(
      "periodic",
      [](std::size_t n) {
        const double c = static_cast<double>(n % 3) - 1.0;
        return DiscreteDistribution::uniform_over(std::vector<double>{-1.0, c, 2.0 * c});
      },
      500);
  const auto ui = ui_from_distortion_pair(periodic, g, f);
  CHECK(ui.verdict == Verdict::ui);
  CHECK(is_Dc(ui.ell));
  const auto not_ui = ui_from_distortion_pair(nbernoulli(10000), g, f);
  CHECK(not_ui.verdict == Verdict::not_ui);
  CHECK((not_ui.upper.verdict == Verdict::not_ui || not_ui.lower.verdict == Verdict::not_ui));
  CHECK_THROWS_AS(ui_from_distortion_pair(single(), g, DistortionFunction::es_clip(0.5)), std::invalid_argument);
}

TEST_CASE("finiteness classification") {
  const auto p = classify_finiteness(DistortionFunction::power(0.5));
  CHECK_FALSE(p.expectation_dominated);
  CHECK(p.threshold_reached);
  CHECK(p.witness_value > 10.0);
  REQUIRE(p.witness.has_value());
  CHECK(choquet(DistortionFunction::power(0.5), *p.witness) == doctest::Approx(p.witness_value));
  for (std::size_t n = 0; n < p.levels.size(); ++n) {
    CHECK(p.levels[n] == doctest::Approx(std::ldexp(1.0, -4 * static_cast<int>(n + 1) - 1)).epsilon(1e-9));
  }

  const auto e = classify_finiteness(DistortionFunction::es_clip(0.9));
  CHECK(e.expectation_dominated);
  CHECK(e.constant.value() == doctest::Approx(10.0));
  CHECK_FALSE(e.witness.has_value());

  for (const auto& h : {DistortionFunction::identity(), DistortionFunction::es_clip(0.3), DistortionFunction::ies(),
                        DistortionFunction::power(0.7)}) {
    CHECK(classify_finiteness(h).expectation_dominated == slope_limit(h).is_finite());
  }
}

TEST_CASE("convex function check") {
  const auto square = [](double x) { return x * x; };
  CHECK(dvp_phi_check(bounded(300), square) == std::optional<bool>(true));
  CHECK(dvp_phi_check(nbernoulli(10000), square) == std::optional<bool>(false));
  CHECK(dvp_phi_check(half_coin(), [](double x) { return x * std::log1p(x); }) == std::optional<bool>(true));
}

TEST_CASE("verdicts agree when conclusive") {
  const auto square = [](double x) { return x * x; };
  for (const auto& fam : {nbernoulli(4096), single(), bounded(256), half_coin()}) {
    const auto env = tail_envelope(fam, dyadic_grid(20)).verdict;
    const auto dist = ui_from_distortion(fam, DistortionFunction::ies()).verdict;
    const auto phi = dvp_phi_check(fam, square);
    if (env != Verdict::inconclusive && dist != Verdict::inconclusive) CHECK(env == dist);
    if (phi && dist != Verdict::inconclusive) CHECK(*phi == (dist == Verdict::ui));
  }
}
