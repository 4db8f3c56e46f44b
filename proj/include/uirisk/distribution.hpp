#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace uirisk {

/// Atoms closer than this are identified.
inline constexpr double kAtomMergeTolerance = 1e-12;
/// Maximum allowed deviation of the input weight total from 1.
inline constexpr double kWeightSumTolerance = 1e-12;

/// Left-continuous generalized inverse of a step CDF.
///
/// breakpoints[j] is the cumulative probability reached at values[j], so the
/// quantile at level t is values[j] for the first j with breakpoints[j] >= t.
class QuantileFunction {
 public:
  QuantileFunction(std::vector<double> breakpoints, std::vector<double> values);

  /// Quantile at level t in (0, 1].
  double operator()(double t) const;

  /// Exact integral of the quantile over [lo, hi] ⊆ [0, 1].
  double integral(double lo, double hi) const;

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Law of a random variable with finitely many atoms.
///
/// Atoms are sorted strictly increasing and carry positive weights that sum
/// to exactly 1. Construction sorts the input, merges atoms within
/// kAtomMergeTolerance, drops zero weights and renormalizes once.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<double> atoms, std::vector<double> weights);

  static DiscreteDistribution point_mass(double value);
  /// Equal weight on every listed value (repeated values accumulate weight).
  static DiscreteDistribution uniform_over(std::span<const double> values);
  /// scale · Bernoulli(theta).
  static DiscreteDistribution bernoulli(double theta, double scale = 1.0);

  std::span<const double> atoms() const noexcept { return atoms_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double min() const noexcept { return atoms_.front(); }
  double max() const noexcept { return atoms_.back(); }

  /// upper_tail()[j] = P(X >= atoms[j]), accumulated from the top; the entry
  /// past the last atom is 0 and the first entry is exactly 1.
  std::span<const double> upper_tail() const noexcept { return upper_tail_; }
  /// cumulative()[j] = P(X <= atoms[j]), accumulated from the bottom; the last
  /// entry is exactly 1.
  std::span<const double> cumulative() const noexcept { return cumulative_; }

  double cdf(double x) const;
  double survival(double x) const;
  QuantileFunction quantile() const;

  friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> upper_tail_;
  std::vector<double> cumulative_;
};

/// Empirical law of a sample.
DiscreteDistribution from_samples(std::span<const double> samples);

/// Value-at-Risk: inf{x : P(X <= x) >= p} for p in (0, 1).
double var(const DiscreteDistribution& x, double p);

/// Law of |X|.
DiscreteDistribution fold(const DiscreteDistribution& x);
/// Law of −X.
DiscreteDistribution negate(const DiscreteDistribution& x);
/// Law of min(X, cap).
DiscreteDistribution truncate(const DiscreteDistribution& x, double cap);
/// Law of X + c.
DiscreteDistribution shift(const DiscreteDistribution& x, double c);
/// Law of λX.
DiscreteDistribution scale(const DiscreteDistribution& x, double lambda);
/// Mixture Σ ws[i] · law(xs[i]); ws must be a probability vector.
DiscreteDistribution mix(std::span<const DiscreteDistribution> xs, std::span<const double> ws);

double mean(const DiscreteDistribution& x);

/// An indexed collection of distributions, either listed explicitly or
/// produced by a deterministic generator n -> member for n in 1..horizon.
class DistributionFamily {
 public:
  using Generator = std::function<DiscreteDistribution(std::size_t)>;

  DistributionFamily(std::string label, std::vector<DiscreteDistribution> members);
  DistributionFamily(std::string label, Generator generator, std::size_t horizon);

  const std::string& label() const noexcept { return label_; }
  std::size_t horizon() const noexcept { return horizon_; }

  /// Member n, 1-based.
  DiscreteDistribution member(std::size_t n) const;

  /// The same family restricted to its first `horizon` members.
  DistributionFamily truncated(std::size_t horizon) const;

 private:
  std::string label_;
  std::variant<std::vector<DiscreteDistribution>, Generator> source_;
  std::size_t horizon_ = 0;
};

}  // namespace uirisk
