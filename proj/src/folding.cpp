#include "uirisk/folding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uirisk/parallel.hpp"
#include "uirisk/random.hpp"

namespace uirisk {

namespace {

constexpr double kZeroTolerance = 1e-13;

double position_scale(const Position& x) {
  double scale = 0.0;
  if (const auto* d = std::get_if<DiscreteDistribution>(&x)) {
    scale = std::max(std::abs(d->min()), std::abs(d->max()));
  } else {
    for (double v : std::get<StateVector>(x).values) scale = std::max(scale, std::abs(v));
  }
  return scale > 0.0 ? scale : 1.0;
}

std::optional<ExtendedReal> known_bound(const RiskMeasure& rho) {
  if (const auto* d = std::get_if<measure::Distortion>(&rho.spec())) {
    if (!d->h.is_concave()) return std::nullopt;
    return bound_b(d->h);
  }
  if (const auto* k = std::get_if<measure::KusuokaSup>(&rho.spec())) {
    // ρ_i(|X|) <= b_i max(ρ_i(X), ρ_i(−X)) <= b_i max(ρ(X), ρ(−X)).
    ExtendedReal b = 1.0;
    for (const auto& h : k->members) b = max(b, bound_b(h));
    return b;
  }
  return std::nullopt;
}

}  // namespace

ExtendedReal folding_quotient(const ExtendedReal& numerator, const ExtendedReal& denominator, double scale) {
  const double eps = kZeroTolerance * scale;
  auto is_zero = [eps](const ExtendedReal& v) { return v.is_finite() && std::abs(v.value()) <= eps; };
  if (!numerator.is_finite() && !denominator.is_finite()) return 1.0;
  if (is_zero(denominator)) {
    if (is_zero(numerator)) return 1.0;
    if (!numerator.is_finite()) return numerator;
    return numerator.value() > 0 ? ExtendedReal::infinity() : ExtendedReal::negative_infinity();
  }
  if (!denominator.is_finite()) return 0.0;
  if (!numerator.is_finite()) {
    return (numerator.is_positive_infinity() == (denominator.value() > 0)) ? ExtendedReal::infinity()
                                                                           : ExtendedReal::negative_infinity();
  }
  return numerator.value() / denominator.value();
}

FoldingReport folding_ratio(const RiskMeasure& rho, const Position& x) {
  FoldingReport r{0.0, known_bound(rho), x, 0.0, 0.0, 0.0};
  r.rho_abs = evaluate(rho, fold(x));
  r.rho_pos = evaluate(rho, x);
  r.rho_neg = evaluate(rho, negate(x));
  r.ratio = folding_quotient(r.rho_abs, max(r.rho_pos, r.rho_neg), position_scale(x));
  return r;
}

ExtendedReal lemma_max(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    throw std::invalid_argument("lemma_max: a and b must lie in [0, 1]");
  }
  if (a * b >= 1.0) return ExtendedReal::infinity();
  return (2.0 + a + b) / (1.0 - a * b);
}

ExtendedReal bound_b(const DistortionFunction& h) {
  if (!h.is_concave()) throw std::invalid_argument("bound_b: h must be concave");
  const double half = h.at_half();
  if (half - 0.5 <= 1e-15) return ExtendedReal::infinity();
  return (half + 0.5) / (half - 0.5);
}

DiscreteDistribution sharpness_family(double p, double epsilon) {
  if (!(p >= 0.5 && p < 1.0)) throw std::invalid_argument("sharpness_family: p must lie in [1/2, 1)");
  if (!(epsilon > 0.0 && epsilon < 2.0)) {
    throw std::invalid_argument("sharpness_family: epsilon must lie in (0, 2)");
  }
  const double w = epsilon * (1.0 - p) / (4.0 - epsilon);
  return DiscreteDistribution({-1.0, 2.0 * (1.0 - p) / w}, {1.0 - w, w});
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Candidate {
  ExtendedReal ratio = ExtendedReal::negative_infinity();
  std::optional<Position> witness;

  void offer(const ExtendedReal& r, const Position& x) {
    if (r > ratio) {
      ratio = r;
      witness = x;
    }
  }
};

ExtendedReal ratio_of(const RiskMeasure& rho, const Position& x) { return folding_ratio(rho, x).ratio; }

Position random_position(const RiskMeasure& rho, int max_atoms, std::mt19937_64& rng) {
  auto magnitude = [&rng] {
    const double s = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    if (uniform01(rng) < 0.05) return 0.0;
    return s * std::exp(-3.0 + 6.0 * uniform01(rng));
  };
  if (rho.needs_state_space()) {
    std::vector<double> v(rho.dimension());
    for (double& x : v) x = magnitude();
    return StateVector(std::move(v));
  }
  const int k = 2 + static_cast<int>(uniform01(rng) * (max_atoms - 1));
  std::vector<double> atoms(static_cast<std::size_t>(k));
  std::vector<double> weights(static_cast<std::size_t>(k));
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    atoms[static_cast<std::size_t>(i)] = magnitude();
    weights[static_cast<std::size_t>(i)] = std::exp(-8.0 * uniform01(rng));
    total += weights[static_cast<std::size_t>(i)];
  }
  for (double& w : weights) w /= total;
  return DiscreteDistribution(std::move(atoms), std::move(weights));
}

Position two_point(double log_w, double log_c) {
  const double w = std::exp(log_w);
  return DiscreteDistribution({-1.0, std::exp(log_c)}, {1.0 - w, w});
}

void scan_two_point(const RiskMeasure& rho, Candidate& best) {
  const double lw_lo = std::log(1e-4);
  const double lw_hi = std::log(0.9999);
  const double lc_lo = std::log(1e-3);
  const double lc_hi = std::log(1e4);
  constexpr int kSteps = 120;
  double best_lw = 0.0;
  double best_lc = 0.0;
  ExtendedReal scan_best = ExtendedReal::negative_infinity();
  for (int i = 0; i <= kSteps; ++i) {
    const double lw = lw_lo + (lw_hi - lw_lo) * i / kSteps;
    for (int j = 0; j <= kSteps; ++j) {
      const double lc = lc_lo + (lc_hi - lc_lo) * j / kSteps;
      const Position x = two_point(lw, lc);
      const ExtendedReal r = ratio_of(rho, x);
      best.offer(r, x);
      if (r > scan_best) {
        scan_best = r;
        best_lw = lw;
        best_lc = lc;
      }
    }
  }
  if (!scan_best.is_finite()) return;
  // Compass search around the best grid point.
  double step = (lw_hi - lw_lo) / kSteps;
  const double dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (int iter = 0; iter < 200 && step > 1e-9; ++iter) {
    bool improved = false;
    for (const auto& d : dirs) {
      const double lw = std::min(best_lw + d[0] * step, lw_hi);
      const double lc = best_lc + d[1] * step;
      const Position x = two_point(lw, lc);
      const ExtendedReal r = ratio_of(rho, x);
      if (r > scan_best) {
        scan_best = r;
        best_lw = lw;
        best_lc = lc;
        best.offer(r, x);
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
}

}  // namespace

FoldingReport empirical_folding_score(const RiskMeasure& rho, const SearchConfig& config) {
  if (config.atoms < 2 || config.atoms > 8) {
    throw std::invalid_argument("empirical_folding_score: atom count must lie in [2, 8]");
  }
  Candidate best;
  const Position symmetric = rho.needs_state_space()
                                 ? Position(StateVector([&] {
                                     std::vector<double> v(rho.dimension(), 0.0);
                                     v.front() = 1.0;
                                     if (v.size() > 1) v.back() = -1.0;
                                     return v;
                                   }()))
                                 : Position(DiscreteDistribution({-1.0, 1.0}, {0.5, 0.5}));
  best.offer(ratio_of(rho, symmetric), symmetric);
  if (best.ratio.is_positive_infinity()) return folding_ratio(rho, *best.witness);

  if (const auto* d = std::get_if<measure::Distortion>(&rho.spec())) {
    if (const auto* clip = std::get_if<distortion::EsClip>(&d->h.spec()); clip && clip->p >= 0.5) {
      const Position x = sharpness_family(clip->p, 0.01);
      best.offer(ratio_of(rho, x), x);
    }
  }
  if (!rho.needs_state_space()) scan_two_point(rho, best);

  constexpr std::uint64_t kChunk = 512;
  const std::uint64_t chunks = (config.iterations + kChunk - 1) / kChunk;
  std::vector<Candidate> per_chunk(chunks);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    auto rng = make_rng(config.seed, "folding.empirical_folding_score", c);
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(config.iterations, begin + kChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      const Position x = random_position(rho, config.atoms, rng);
      per_chunk[c].offer(ratio_of(rho, x), x);
    }
  });
  for (const auto& c : per_chunk) {
    if (c.witness) best.offer(c.ratio, *c.witness);
  }
  return folding_ratio(rho, *best.witness);
}

// ---------------------------------------------------------------------------
// Gallery

std::vector<GalleryEntry> counterexample_gallery(std::uint64_t seed) {
  std::vector<GalleryEntry> out;

  {
    const RiskMeasure rho = RiskMeasure::entropic(1.0);
    GalleryEntry e{"entropic", rho, folding_ratio(rho, DiscreteDistribution({-1.0, 1.0}, {0.5, 0.5})), {}, ""};
    for (double lambda : {1.0, 0.1, 0.01}) {
      const FoldingReport r = folding_ratio(rho, DiscreteDistribution({-lambda, lambda}, {0.5, 0.5}));
      e.family.emplace_back(lambda, r.ratio);
      e.report = r;
    }
    e.note = "X = lambda (2 1_A - 1), P(A) = 1/2; ratio grows like 2/lambda as lambda -> 0";
    out.push_back(std::move(e));
  }
  {
    const RiskMeasure rho = RiskMeasure::scenario_sup({{0.25, 0.5, 0.25}, {0.5, 0.0, 0.5}});
    out.push_back({"scenario_sup", rho, folding_ratio(rho, StateVector({1.0, 0.0, -1.0})), {},
                   "three-cell space; both scenarios price X and -X at 0"});
  }
  {
    const RiskMeasure rho = RiskMeasure::capacity(2, {0.0, 0.5, 0.5, 1.0});
    out.push_back({"capacity", rho, folding_ratio(rho, StateVector({1.0, -1.0})), {},
                   "cells S+ and S-, nu(A) = (mu(A n S+) ^ 1/2) + (mu(A n S-) ^ 1/2)"});
  }
  {
    const RiskMeasure rho =
        RiskMeasure::kusuoka_sup({DistortionFunction::es_clip(0.5), DistortionFunction::power(0.5)});
    out.push_back({"kusuoka_sup", rho, empirical_folding_score(rho, {4, 20000, seed}), {},
                   "stress search only; finiteness for general law-invariant measures is not decided here"});
  }
  return out;
}

}  // namespace uirisk
