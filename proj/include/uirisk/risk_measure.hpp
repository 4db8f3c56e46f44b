#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "uirisk/distortion.hpp"
#include "uirisk/distribution.hpp"
#include "uirisk/extended_real.hpp"

namespace uirisk {

// ---------------------------------------------------------------------------
// Distortion integrals on finite laws

/// Choquet integral of X with respect to h∘P, by the survival-function step
/// integral a_1 + Σ_{j>=2} (a_j − a_{j−1}) h(P(X >= a_j)). Always finite on a
/// finite support.
double choquet(const DistortionFunction& h, const DiscreteDistribution& x);

/// The same integral in quantile form Σ_j a_j (h(P(X >= a_j)) − h(P(X > a_j))).
/// Agrees with choquet() whenever h is left-continuous.
double choquet_quantile_form(const DistortionFunction& h, const DiscreteDistribution& x);

/// Expected Shortfall (1/(1−p)) ∫_p^1 VaR_q dq, exact tail average.
double es(const DiscreteDistribution& x, double p);
/// es(fold(x), p).
double es_folded(const DiscreteDistribution& x, double p);

/// Max over subsets A of size (1−p)·n of the mean of values on A, by
/// exhaustive enumeration. Requires n <= 16 and an integral subset size.
double es_sup_bruteforce(std::span<const double> values, double p);

/// ∫_0^1 −log(1−q) VaR_q dq, integrated exactly on each quantile step.
double ies_direct(const DiscreteDistribution& x);

/// Discretized law of U^{−1}(log U)^{−2}, U uniform on [0, 1/2].
///
/// The upper-quantile function Q(q) = 2 / (q log²(q/2)) is replaced by its
/// exact average on each cell: bulk_cells equal cells on (0, 1], the first of
/// which is refined into tail_octaves dyadic octaves of 16 geometric sub-cells
/// each, and the remaining mass near 0 is collapsed into one atom. Every cell
/// keeps its exact integral, so the mean equals 2 / log 2 up to rounding.
DiscreteDistribution ies_counterexample_law(std::size_t bulk_cells = 2000, int tail_octaves = 60);

// ---------------------------------------------------------------------------
// Risk measures

/// A random variable on a fixed finite space: one value per cell, with cell
/// probabilities (uniform when omitted).
struct StateVector {
  std::vector<double> values;
  std::vector<double> probabilities;

  StateVector() = default;
  explicit StateVector(std::vector<double> values);
  StateVector(std::vector<double> values, std::vector<double> probabilities);

  std::size_t size() const noexcept { return values.size(); }
  DiscreteDistribution law() const;
};

/// What a risk measure is applied to.
using Position = std::variant<DiscreteDistribution, StateVector>;

Position fold(const Position& x);
Position negate(const Position& x);

namespace measure {

struct Distortion {
  DistortionFunction h;
};

/// (1/β) log E[exp(βX)].
struct Entropic {
  double beta;
};

/// max over scenarios Q of E^Q[X]; each scenario is a probability vector
/// over the cells of a shared finite space.
struct ScenarioSup {
  std::vector<std::vector<double>> scenarios;
};

/// Choquet integral against a set function ν on the subsets of k cells.
/// nu[mask] is ν of the cells whose bits are set in mask.
struct Capacity {
  std::size_t cells;
  std::vector<double> nu;
};

/// max_i ρ_{h_i}, each h_i concave.
struct KusuokaSup {
  std::vector<DistortionFunction> members;
};

}  // namespace measure

class RiskMeasure {
 public:
  using Spec = std::variant<measure::Distortion, measure::Entropic, measure::ScenarioSup, measure::Capacity,
                            measure::KusuokaSup>;

  static RiskMeasure distortion(DistortionFunction h);
  static RiskMeasure expected_shortfall(double p) { return distortion(DistortionFunction::es_clip(p)); }
  static RiskMeasure mean() { return distortion(DistortionFunction::identity()); }
  static RiskMeasure entropic(double beta);
  /// Each scenario must be a probability vector; all share one dimension.
  static RiskMeasure scenario_sup(std::vector<std::vector<double>> scenarios);
  /// ν(∅) = 0, ν(all) = 1, monotone; submodularity is checked exhaustively
  /// for at most 12 cells and required.
  static RiskMeasure capacity(std::size_t cells, std::vector<double> nu);
  static RiskMeasure kusuoka_sup(std::vector<DistortionFunction> members);

  const Spec& spec() const noexcept { return spec_; }
  std::string name() const;

  /// Whether positions must be StateVectors on the measure's own space.
  bool needs_state_space() const noexcept;
  /// Cell count for scenario and capacity measures, 0 otherwise.
  std::size_t dimension() const noexcept;

 private:
  explicit RiskMeasure(Spec spec) : spec_(std::move(spec)) {}
  Spec spec_;
};

/// ρ(X). Law-invariant measures accept either position type; scenario and
/// capacity measures require a StateVector of matching dimension.
ExtendedReal evaluate(const RiskMeasure& rho, const Position& x);

}  // namespace uirisk
