// Acceptance checks. Each criterion prints one PASS/FAIL line with the
// measured evidence; the exit status is nonzero when any selected check fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "uirisk/convergence.hpp"
#include "uirisk/folding.hpp"
#include "uirisk/invest.hpp"
#include "uirisk/random.hpp"
#include "uirisk/risk_measure.hpp"
#include "uirisk/ui_diag.hpp"

using namespace uirisk;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buffer[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

oracle::Law law_of(const DiscreteDistribution& x) {
  return {{x.atoms().begin(), x.atoms().end()}, {x.weights().begin(), x.weights().end()}};
}

DiscreteDistribution random_law(std::mt19937_64& rng, int max_atoms) {
  const int k = 1 + static_cast<int>(uniform01(rng) * max_atoms);
  std::vector<double> atoms, weights;
  for (int i = 0; i < k; ++i) {
    const double u = uniform01(rng);
    // Mix coarse lattice points (ties, exact zeros) with spread-out magnitudes.
    const double magnitude =
        u < 0.3 ? std::round(8.0 * uniform01(rng)) / 2.0 : std::exp(6.0 * uniform01(rng) - 3.0);
    atoms.push_back(uniform01(rng) < 0.5 ? -magnitude : magnitude);
    weights.push_back(0.01 + uniform01(rng));
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return DiscreteDistribution(atoms, weights);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. ES_p folding ratio on the sharpness family equals 3 − ε.
Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (auto [p, eps] : {std::pair{0.75, 0.5}, {0.75, 1.0}, {0.9, 0.1}}) {
    const auto r = folding_ratio(RiskMeasure::expected_shortfall(p), sharpness_family(p, eps));
    worst = std::max(worst, r.ratio.is_finite() ? std::abs(r.ratio.value() - (3.0 - eps)) : INFINITY);
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 1.0,
          fmt("max |ratio - (3 - eps)| = %.3g (tol 1e-12), %.3f s (limit 1 s)", worst, t)};
}

// 2. 1 <= ratio <= bound_b(h) on 10^4 random laws per distortion.
Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<const char*, DistortionFunction>> hs{{"es_clip(0.6)", DistortionFunction::es_clip(0.6)},
                                                                   {"es_clip(0.9)", DistortionFunction::es_clip(0.9)},
                                                                   {"power(0.5)", DistortionFunction::power(0.5)},
                                                                   {"ies", DistortionFunction::ies()}};
  auto rng = make_rng(7, "acceptance.criterion2");
  std::vector<DiscreteDistribution> laws;
  for (int i = 0; i < 10000; ++i) laws.push_back(random_law(rng, 6));
  long violations = 0;
  double max_fraction = 0.0;
  double min_ratio = INFINITY;
  for (const auto& [name, h] : hs) {
    const auto rho = RiskMeasure::distortion(h);
    const double b = bound_b(h).value();
    for (const auto& x : laws) {
      const ExtendedReal r = folding_ratio(rho, x).ratio;
      // Relative slack of 1e-12 absorbs rounding when fold(X) and X share their upper tail.
      if (!(r >= ExtendedReal(1.0 - 1e-12)) || !(r <= ExtendedReal(b * (1.0 + 1e-12)))) {
        ++violations;
      } else {
        max_fraction = std::max(max_fraction, r.value() / b);
        min_ratio = std::min(min_ratio, r.value());
      }
    }
  }
  const double t = seconds_since(t0);
  return {violations == 0 && t < 30.0,
          fmt("%ld violations over 4 x 10000 laws (rel tol 1e-12), min ratio = %.17g, max ratio/bound = %.6f, "
              "%.2f s (limit 30 s)",
              violations, min_ratio, max_fraction, t)};
}

// 3. Lemma closed form against grid maximization.
Outcome criterion3() {
  auto rng = make_rng(7, "acceptance.criterion3");
  double worst = 0.0;
  int cases = 0;
  while (cases < 100) {
    const double a = uniform01(rng);
    const double b = uniform01(rng);
    if (a * b >= 1.0) continue;
    ++cases;
    worst = std::max(worst, std::abs(lemma_max(a, b).value() - oracle::lemma_grid(a, b)));
  }
  const bool inf = lemma_max(1.0, 1.0).is_positive_infinity();
  return {worst <= 1e-6 && inf, fmt("max |closed - grid| = %.3g over 100 pairs (tol 1e-6); (1,1) -> %s", worst,
                                    lemma_max(1.0, 1.0).to_string().c_str())};
}

// 4. es equals the subset-enumeration supremum.
Outcome criterion4() {
  auto rng = make_rng(7, "acceptance.criterion4");
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(uniform01(rng) * 11);  // 2..12
    const int k = 1 + static_cast<int>(uniform01(rng) * (n - 1));
    const double p = 1.0 - static_cast<double>(k) / n;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = uniform01(rng) < 0.2 ? 1.0 : 10.0 * uniform01(rng) - 5.0;
    worst = std::max(worst, std::abs(es(DiscreteDistribution::uniform_over(v), p) - es_sup_bruteforce(v, p)));
  }
  return {worst <= 1e-12, fmt("max |es - bruteforce| = %.3g over 50 instances (tol 1e-12)", worst)};
}

// 5. ES_0.25 search stays at or below 6 while the bound is 7.
Outcome criterion5() {
  SearchConfig config;
  config.iterations = 100000;
  config.seed = 7;
  const auto r = empirical_folding_score(RiskMeasure::expected_shortfall(0.25), config);
  const double b = bound_b(DistortionFunction::es_clip(0.25)).value();
  const bool ok = r.ratio.is_finite() && r.ratio.value() <= 6.0 + 1e-12 && std::abs(b - 7.0) <= 1e-12;
  return {ok, fmt("best ratio %.12f (<= 6 + 1e-12) after 1e5 iterations; bound_b = %.12f (7 within 1e-12)",
                  r.ratio.to_double(), b)};
}

// 6. UI verdicts on n Bernoulli(1/n) and a single law; ies growth 1 + log n.
Outcome criterion6() {
  const DistributionFamily nb(
      "nbernoulli",
      [](std::size_t n) { return DiscreteDistribution::bernoulli(1.0 / n, static_cast<double>(n)); }, 10000);
  const UIReport full = tail_envelope(nb, dyadic_grid(20));
  // With N = 10^4 every member fits under the level only for k <= 13.
  const UIReport inner = tail_envelope(nb, dyadic_grid(13));
  double env_dev = 0.0;
  for (const auto& e : inner.envelope) env_dev = std::max(env_dev, std::abs(e.env_abs - 1.0));
  const DistributionFamily one("single", {DiscreteDistribution({-2.0, 0.0, 3.0}, {0.3, 0.4, 0.3})});
  const UIReport single = tail_envelope(one, dyadic_grid(20));
  double growth_dev = 0.0;
  for (std::size_t n : {10u, 100u, 1000u}) {
    const double v = choquet(DistortionFunction::ies(), fold(nb.member(n)));
    growth_dev = std::max(growth_dev, std::abs(v - (1.0 + std::log(static_cast<double>(n)))));
  }
  const bool ok = full.verdict == Verdict::not_ui && env_dev <= 1e-12 && single.verdict == Verdict::ui &&
                  growth_dev <= 1e-9;
  return {ok, fmt("nbernoulli dyadic:20 -> %s, max |env - 1| on dyadic:13 = %.3g; single -> %s; "
                  "max |ies - (1 + log n)| = %.3g (tol 1e-9)",
                  to_string(full.verdict).c_str(), env_dev, to_string(single.verdict).c_str(), growth_dev)};
}

// 7. The constructed distortion is concave, in D_c, and bounds the family exactly.
Outcome criterion7() {
  const DiscreteDistribution base({-2.0, -1.0, 0.0, 1.0, 2.0}, {0.1, 0.2, 0.4, 0.2, 0.1});
  const std::vector<DistributionFamily> families{
      DistributionFamily("single", {base}),
      DistributionFamily("coin", {DiscreteDistribution::bernoulli(0.5)}),
      DistributionFamily(
          "bounded",
          [](std::size_t n) {
            const double c = 1.0 + 1.0 / static_cast<double>(n);
            return DiscreteDistribution::uniform_over(std::vector<double>{-c, c});
          },
          1000),
      DistributionFamily(
          "shifted", [base](std::size_t n) { return shift(base, 1.0 / static_cast<double>(n)); }, 1000)};
  bool ok = true;
  std::string detail;
  for (const auto& fam : families) {
    const DvpResult d = dvp_distortion(fam);
    double sup = 0.0;
    for (std::size_t n = 1; n <= fam.horizon(); ++n) sup = std::max(sup, choquet(d.h, fold(fam.member(n))));
    const bool here = d.h.is_concave() && is_Dc(d.h) && sup <= 1.0 / d.g_one;
    ok = ok && here;
    detail += fmt("%s%s: sup %.6g <= 1/g(1) %.6g%s", detail.empty() ? "" : "; ", fam.label().c_str(), sup,
                  1.0 / d.g_one, here ? "" : " (fails)");
  }
  return {ok, detail + "; all concave and in D_c"};
}

// 8. Witness for power(1/2); IES of the truncated heavy-tailed law.
Outcome criterion8() {
  const FinitenessReport w = classify_finiteness(DistortionFunction::power(0.5));
  const DiscreteDistribution law = ies_counterexample_law();
  const double target = 2.0 / std::log(2.0);
  const double mean_dev = std::abs(mean(law) - target);
  std::vector<double> values;
  for (double m : {1e2, 1e3, 1e4}) values.push_back(ies_direct(truncate(law, m)));
  const bool increasing = values[0] < values[1] && values[1] < values[2];
  const bool exceeds = values[2] > 2.0 * std::log(1e4);
  const bool ok = w.threshold_reached && w.witness_value > 10.0 && increasing && exceeds && mean_dev <= 1e-3;
  return {ok, fmt("power(1/2) witness %.4f with %d terms (> 10); IES at M = 1e2, 1e3, 1e4: %.4f, %.4f, %.4f "
                  "(increasing: %s; exceeds 2 log M = %.4f at M = 1e4: %s); |mean - 2/log 2| = %.3g (tol 1e-3)",
                  w.witness_value, w.terms, values[0], values[1], values[2], increasing ? "yes" : "no",
                  2.0 * std::log(1e4), exceeds ? "yes" : "no", mean_dev)};
}

// 9. w1 against the transport LP; metric axioms.
Outcome criterion9() {
  auto rng = make_rng(7, "acceptance.criterion9");
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto a = random_law(rng, 6);
    const auto b = random_law(rng, 6);
    worst = std::max(worst, std::abs(w1(a, b) - oracle::lp_transport(law_of(a), law_of(b))));
  }
  long broken = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_law(rng, 6);
    const auto b = random_law(rng, 6);
    const auto c = random_law(rng, 6);
    if (w1(a, b) != w1(b, a)) ++broken;
    if (w1(a, a) != 0.0 || w1(a, b) < 0.0) ++broken;
    if (w1(a, c) > w1(a, b) + w1(b, c) + 1e-12) ++broken;
  }
  return {worst <= 1e-10 && broken == 0,
          fmt("max |w1 - LP| = %.3g over 200 instances (tol 1e-10); %ld axiom failures on 1000 triples", worst,
              broken)};
}

// 10. Fair-coin weak LLN.
Outcome criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  LlnConfig config;
  config.generator = SampleGenerator::coin();
  config.n_max = 10000;
  config.reps = 200;
  config.seed = 7;
  const auto ies = RiskMeasure::distortion(DistortionFunction::ies());
  const LlnReport r = lln_experiment(config, ies, ies);
  const double t = seconds_since(t0);
  const auto& last = r.rows.back();
  const double p = last.exceedance[1];
  return {last.n == 10000 && p < 0.01 && t < 60.0,
          fmt("P(|Y_n| > 0.05) = %.4f at n = %zu over 200 reps (< 0.01), %.2f s (limit 60 s)", p, last.n, t)};
}

// 11. ES errors along F + 1/n.
Outcome criterion11() {
  const DiscreteDistribution f({-2.0, -1.0, 0.0, 1.0, 2.0}, {0.1, 0.2, 0.4, 0.2, 0.1});
  std::vector<DiscreteDistribution> seq;
  for (int n = 1; n <= 1000; ++n) seq.push_back(shift(f, 1.0 / n));
  const auto r = es_convergence_experiment(seq, f, {0.5, 0.9, 0.99});
  double worst = 0.0;
  for (const auto& row : r.rows) worst = std::max(worst, std::abs(row.error - 1.0 / static_cast<double>(row.n)));
  return {worst <= 1e-12, fmt("max |error - 1/n| = %.3g over n <= 1000, p in {0.5, 0.9, 0.99} (tol 1e-12)", worst)};
}

// 12. Counterexample gallery.
Outcome criterion12() {
  const auto gallery = counterexample_gallery(7);
  bool ok = true;
  std::string detail;
  for (const auto& e : gallery) {
    if (e.label == "scenario_sup" || e.label == "capacity") {
      const bool here = e.report.ratio.is_positive_infinity() && e.report.rho_pos == ExtendedReal(0.0) &&
                        e.report.rho_neg == ExtendedReal(0.0) && e.report.rho_abs == ExtendedReal(1.0);
      ok = ok && here;
      detail += fmt("%s: ratio %s, (rho(X), rho(-X), rho(|X|)) = (%s, %s, %s); ", e.label.c_str(),
                    e.report.ratio.to_string().c_str(), e.report.rho_pos.to_string().c_str(),
                    e.report.rho_neg.to_string().c_str(), e.report.rho_abs.to_string().c_str());
    } else if (e.label == "entropic") {
      double at_001 = NAN;
      for (const auto& [lambda, ratio] : e.family) {
        if (lambda == 0.01) at_001 = ratio.to_double();
      }
      ok = ok && at_001 > 190.0;
      detail += fmt("entropic ratio at lambda = 0.01: %.4f (> 190); ", at_001);
    }
  }
  if (detail.size() >= 2) detail.resize(detail.size() - 2);
  return {ok, detail};
}

// 13. Sample-approximation experiment on the default investment instance.
Outcome criterion13() {
  const auto t0 = std::chrono::steady_clock::now();
  const InvestProblem prob;
  const auto y = default_background();
  const Prop61Report r = prop61_experiment(prob, y, 8, 7);
  const double t = seconds_since(t0);
  double max_excess = -INFINITY;
  for (const auto& s : r.steps) max_excess = std::max(max_excess, s.feasibility_excess);
  const double last_gap = r.steps.back().w1_to_previous;
  const auto& last = r.steps.back();
  const double allowance = last.eps + 3.0 * r.lipschitz * std::max(last.w1_to_cluster, last.w1_y) + r.solver_tolerance;
  const bool ok = last_gap < 1e-2 && max_excess <= 1e-9 && r.candidate_ok && t < 300.0;
  return {ok, fmt("final successive w1 gap %.3g (< 1e-2); max feasibility excess %.3g (<= 1e-9); "
                  "best %.9f - cluster %.9f = %.3g <= allowance %.4f; %.2f s (limit 300 s)",
                  last_gap, max_excess, r.best_known, r.cluster_objective, r.best_known - r.cluster_objective,
                  allowance, t)};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> kCriteria{
    {"folding sharpness", criterion1},       {"folding bound", criterion2},
    {"lemma closed form", criterion3},       {"ES subset representation", criterion4},
    {"non-sharpness at ES_0.25", criterion5}, {"UI verdicts", criterion6},
    {"distortion construction", criterion7}, {"finiteness classification", criterion8},
    {"Wasserstein oracle", criterion9},      {"weak LLN", criterion10},
    {"ES convergence", criterion11},         {"counterexample gallery", criterion12},
    {"investment sample approximation", criterion13}};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(kCriteria.size())) {
    std::fprintf(stderr, "acceptance: no criterion %d\n", only);
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o{false, ""};
    try {
      o = kCriteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, kCriteria[i].first, o.detail.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
