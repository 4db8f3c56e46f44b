#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uirisk/distortion.hpp"
#include "uirisk/extended_real.hpp"
#include "uirisk/risk_measure.hpp"

namespace uirisk {

struct FoldingReport {
  /// ρ(|X|) / max(ρ(X), ρ(−X)) with ∞/∞ = 1, 0/0 = 1 and c/0 = ∞ for c > 0.
  ExtendedReal ratio;
  /// Upper bound on the ratio when one is known for the measure.
  std::optional<ExtendedReal> bound;
  Position witness;
  ExtendedReal rho_abs;
  ExtendedReal rho_pos;
  ExtendedReal rho_neg;
};

/// numerator / denominator under the folding conventions. Values within
/// 1e−13·scale of zero count as zero.
ExtendedReal folding_quotient(const ExtendedReal& numerator, const ExtendedReal& denominator, double scale = 1.0);

FoldingReport folding_ratio(const RiskMeasure& rho, const Position& x);

/// max over x, y > 0 of (x + y) / ((x − a y) ∨ (y − b x)) = (2 + a + b) / (1 − ab),
/// infinite when ab = 1.
ExtendedReal lemma_max(double a, double b);

/// (h(1/2) + 1/2) / (h(1/2) − 1/2) for concave h; infinite for the identity.
ExtendedReal bound_b(const DistortionFunction& h);

/// Two-point law −1 w.p. 1 − w, 2(1−p)/w w.p. w, with w = ε(1−p)/(4−ε). Its
/// ES_p folding ratio is 3 − ε. Needs p in [1/2, 1) and ε in (0, 2).
DiscreteDistribution sharpness_family(double p, double epsilon);

struct SearchConfig {
  int atoms = 4;
  std::uint64_t iterations = 100000;
  std::uint64_t seed = 7;
};

/// Best folding ratio found by seeded search: a symmetric ±1 probe, random
/// laws with up to `atoms` atoms, a (weight, scale) scan of the two-point
/// family {−1, c} refined by pattern search, and for ES_p with p >= 1/2 the
/// sharpness family at ε = 0.01. Deterministic given the seed.
FoldingReport empirical_folding_score(const RiskMeasure& rho, const SearchConfig& config = {});

struct GalleryEntry {
  std::string label;
  RiskMeasure measure;
  FoldingReport report;
  /// (parameter, ratio) pairs for entries built from a family of positions.
  std::vector<std::pair<double, ExtendedReal>> family;
  std::string note;
};

/// Entropic, scenario-sup and capacity measures with infinite or divergent
/// folding scores, plus a finite Kusuoka supremum stress search.
std::vector<GalleryEntry> counterexample_gallery(std::uint64_t seed = 7);

}  // namespace uirisk
