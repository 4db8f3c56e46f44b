#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "uirisk/distribution.hpp"
#include "uirisk/random.hpp"
#include "uirisk/risk_measure.hpp"

namespace uirisk {

/// 1-Wasserstein distance ∫_0^1 |F^{−1}(t) − G^{−1}(t)| dt, integrated exactly
/// over the merged quantile breakpoints.
double w1(const DiscreteDistribution& f, const DiscreteDistribution& g);

struct CouplingReport {
  double w1 = 0.0;
  std::size_t grid_size = 0;
  /// X*_n = F_n^{−1}(u_i) and X = F^{−1}(u_i) on midpoints u_i = (i − 1/2)/m.
  std::vector<double> x_star;
  std::vector<double> x;
  /// (1/m) Σ |X*_n(u_i) − X(u_i)|.
  double grid_distance = 0.0;
};

/// Comonotone pair of F_n and F_X on a shared uniform grid of size m.
CouplingReport comonotone_version(const DiscreteDistribution& fn, const DiscreteDistribution& fx, std::size_t m);

/// Average of the quantile functions of the given laws (a w1 barycenter).
DiscreteDistribution quantile_average(const std::vector<DiscreteDistribution>& laws);

// ---------------------------------------------------------------------------
// Law of large numbers

/// Draws of an integrable mean-zero variable: "coin" (±1), "pareto:α"
/// (random sign times U^{−1/α}, α > 1) or "zero".
class SampleGenerator {
 public:
  static SampleGenerator parse(const std::string& text);
  static SampleGenerator coin() { return SampleGenerator(Kind::coin, 0.0); }
  static SampleGenerator pareto(double alpha);
  static SampleGenerator zero() { return SampleGenerator(Kind::zero, 0.0); }

  double draw(std::mt19937_64& rng) const;
  std::string name() const;

 private:
  enum class Kind { coin, pareto, zero };
  SampleGenerator(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}
  Kind kind_;
  double alpha_;
};

struct LlnConfig {
  SampleGenerator generator = SampleGenerator::coin();
  std::size_t n_max = 10000;
  std::size_t reps = 200;
  std::uint64_t seed = 7;
  std::vector<double> deltas{0.1, 0.05};
};

struct LlnRow {
  std::size_t n;
  /// Fraction of replications with |Y_n| > δ, one entry per δ.
  std::vector<double> exceedance;
  /// ρ(X̂_n) and ρ′(−X̂_n) for the empirical law of the first n draws.
  double rho_env;
  double rho_prime_env;
};

struct LlnReport {
  std::vector<double> deltas;
  std::vector<LlnRow> rows;
  bool hypothesis_violated = false;
};

/// Empirical exceedance probabilities of Y_n = (1/n) Σ X_i along n = 1, 2, 4, ...,
/// n_max; replication r draws from seed + r. ρ and ρ′ must be infinite on L¹:
/// a D_c distortion, or a Kusuoka supremum with a D_c member.
LlnReport lln_experiment(const LlnConfig& config, const RiskMeasure& rho, const RiskMeasure& rho_prime);

// ---------------------------------------------------------------------------
// ES convergence

struct EsConvergenceRow {
  std::size_t n;
  double p;
  double error;
};

struct EsTrend {
  double p;
  /// Least-squares slope of log error against log n (NaN when errors vanish).
  double log_log_slope;
  /// Share of consecutive steps where the error does not increase.
  double monotone_fraction;
};

struct EsConvergenceReport {
  std::vector<EsConvergenceRow> rows;
  std::vector<EsTrend> trends;
  /// sup_n IES(F_n) and sup_n IES(−F_n) over the sequence.
  double ies_env_pos = 0.0;
  double ies_env_neg = 0.0;
};

/// |ES_p(F_n) − ES_p(F)| for n = 1..size and each p.
EsConvergenceReport es_convergence_experiment(const std::vector<DiscreteDistribution>& sequence,
                                              const DiscreteDistribution& limit, const std::vector<double>& levels);

// ---------------------------------------------------------------------------
// Subsequences

struct SubsequenceReport {
  /// 1-based indices n_1 < n_2 < ..., one per level k.
  std::vector<std::size_t> indices;
  /// Radius 2^{−k} used at each level.
  std::vector<double> radii;
  /// Members of the final cluster (1-based).
  std::vector<std::size_t> cluster;
  DiscreteDistribution candidate;
  /// max over the selected indices of w1 to the candidate.
  double max_gap = 0.0;
};

/// Greedy nested clustering: at level k the current cluster is replaced by
/// its largest w1 ball of radius 2^{−k} around a member (ties: the ball that
/// contains the largest index), and the next index is the smallest member
/// beyond the previous one. Stops after max_levels or when the ball has no
/// later member. Throws std::runtime_error("inconclusive at horizon") when
/// fewer than three levels are reached.
SubsequenceReport subsequence_extract(const DistributionFamily& family, int max_levels = 20);

}  // namespace uirisk
