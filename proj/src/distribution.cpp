#include "uirisk/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace uirisk {

namespace {

struct Atom {
  double value;
  double weight;
};

// Sort, drop zero weights, merge near-coincident atoms. Leaves weights
// unnormalized.
std::vector<Atom> canonical_atoms(std::span<const double> atoms, std::span<const double> weights) {
  if (atoms.size() != weights.size()) {
    throw std::invalid_argument("distribution: atoms and weights differ in length");
  }
  std::vector<Atom> pairs;
  pairs.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(atoms[i])) {
      throw std::invalid_argument("distribution: non-finite atom");
    }
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw std::invalid_argument("distribution: weights must be finite and non-negative");
    }
    if (weights[i] > 0.0) pairs.push_back({atoms[i], weights[i]});
  }
  if (pairs.empty()) {
    throw std::invalid_argument("distribution: no atom carries positive weight");
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> merged;
  merged.reserve(pairs.size());
  double cluster_start = pairs.front().value;
  merged.push_back(pairs.front());
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].value - cluster_start <= kAtomMergeTolerance) {
      merged.back().weight += pairs[i].weight;
    } else {
      cluster_start = pairs[i].value;
      merged.push_back(pairs[i]);
    }
  }
  return merged;
}

double total_weight(std::span<const double> weights) {
  // Kahan summation keeps long empirical weight vectors honest.
  double sum = 0.0;
  double carry = 0.0;
  for (double w : weights) {
    const double y = w - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

// ---------------------------------------------------------------------------
// QuantileFunction

QuantileFunction::QuantileFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.empty() || breakpoints_.size() != values_.size()) {
    throw std::invalid_argument("quantile: breakpoints and values must be non-empty and aligned");
  }
  for (std::size_t j = 1; j < values_.size(); ++j) {
    if (values_[j] < values_[j - 1] || breakpoints_[j] < breakpoints_[j - 1]) {
      throw std::invalid_argument("quantile: breakpoints and values must be non-decreasing");
    }
  }
}

double QuantileFunction::operator()(double t) const {
  if (!(t > 0.0) || t > 1.0) {
    throw std::invalid_argument("level out of range");
  }
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.end()) return values_.back();
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double QuantileFunction::integral(double lo, double hi) const {
  if (lo < 0.0 || hi > 1.0 || lo > hi) {
    throw std::invalid_argument("quantile integral: need 0 <= lo <= hi <= 1");
  }
  double sum = 0.0;
  double left = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double right = j + 1 == values_.size() ? 1.0 : breakpoints_[j];
    const double a = std::max(left, lo);
    const double b = std::min(right, hi);
    if (b > a) sum += values_[j] * (b - a);
    left = right;
    if (left >= hi) break;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(std::vector<double> atoms, std::vector<double> weights) {
  auto merged = canonical_atoms(atoms, weights);
  std::vector<double> w(merged.size());
  std::transform(merged.begin(), merged.end(), w.begin(), [](const Atom& a) { return a.weight; });
  const double total = total_weight(w);
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    // Internal constructions always pass totals within a few ulps of 1; only
    // caller-supplied weight vectors can fail here.
    throw std::invalid_argument("distribution: weights must sum to 1");
  }
  // Totals already within a few ulps of 1 are kept as is, so rebuilding a law
  // from its own weights reproduces it exactly.
  const double divisor = std::abs(total - 1.0) <= 64.0 * std::numeric_limits<double>::epsilon() ? 1.0 : total;
  atoms_.resize(merged.size());
  weights_.resize(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    atoms_[i] = merged[i].value;
    weights_[i] = merged[i].weight / divisor;
  }
  const std::size_t k = atoms_.size();
  cumulative_.resize(k);
  double running = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    running += weights_[i];
    cumulative_[i] = std::min(running, 1.0);
  }
  cumulative_[k - 1] = 1.0;
  upper_tail_.assign(k + 1, 0.0);
  running = 0.0;
  for (std::size_t i = k; i-- > 0;) {
    running += weights_[i];
    upper_tail_[i] = std::min(running, 1.0);
  }
  upper_tail_[0] = 1.0;
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) {
  return DiscreteDistribution({value}, {1.0});
}

DiscreteDistribution DiscreteDistribution::uniform_over(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  return from_samples(values);
}

DiscreteDistribution DiscreteDistribution::bernoulli(double theta, double scale) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("bernoulli: theta must lie in [0, 1]");
  }
  return DiscreteDistribution({0.0, scale}, {1.0 - theta, theta});
}

double DiscreteDistribution::cdf(double x) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double DiscreteDistribution::survival(double x) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
  return upper_tail_[static_cast<std::size_t>(it - atoms_.begin())];
}

QuantileFunction DiscreteDistribution::quantile() const {
  return QuantileFunction(cumulative_, atoms_);
}

// ---------------------------------------------------------------------------
// Free functions

namespace {

// Rebuild a distribution whose weights are already a probability vector up to
// rounding. The total is restored to exactly 1 before the public constructor
// checks it.
DiscreteDistribution rebuild(std::vector<double> atoms, std::vector<double> weights) {
  const double total = total_weight(weights);
  for (double& w : weights) w /= total;
  return DiscreteDistribution(std::move(atoms), std::move(weights));
}

}  // namespace

DiscreteDistribution from_samples(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double s : sorted) {
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite sample");
  }
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> atoms;
  std::vector<double> counts;
  for (double s : sorted) {
    if (!atoms.empty() && atoms.back() == s) {
      counts.back() += 1.0;
    } else {
      atoms.push_back(s);
      counts.push_back(1.0);
    }
  }
  const double n = static_cast<double>(sorted.size());
  for (double& c : counts) c /= n;
  return rebuild(std::move(atoms), std::move(counts));
}

double var(const DiscreteDistribution& x, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("level out of range");
  auto cum = x.cumulative();
  auto it = std::lower_bound(cum.begin(), cum.end(), p);
  if (it == cum.end()) return x.max();
  return x.atoms()[static_cast<std::size_t>(it - cum.begin())];
}

namespace {

template <typename F>
DiscreteDistribution map_atoms(const DiscreteDistribution& x, F f) {
  std::vector<double> atoms(x.size());
  std::transform(x.atoms().begin(), x.atoms().end(), atoms.begin(), f);
  return DiscreteDistribution(std::move(atoms), {x.weights().begin(), x.weights().end()});
}

}  // namespace

DiscreteDistribution fold(const DiscreteDistribution& x) {
  return map_atoms(x, [](double a) { return std::abs(a); });
}

DiscreteDistribution negate(const DiscreteDistribution& x) {
  return map_atoms(x, [](double a) { return -a; });
}

DiscreteDistribution truncate(const DiscreteDistribution& x, double cap) {
  if (std::isnan(cap)) throw std::invalid_argument("truncate: cap must not be NaN");
  return map_atoms(x, [cap](double a) { return std::min(a, cap); });
}

DiscreteDistribution shift(const DiscreteDistribution& x, double c) {
  return map_atoms(x, [c](double a) { return a + c; });
}

DiscreteDistribution scale(const DiscreteDistribution& x, double lambda) {
  return map_atoms(x, [lambda](double a) { return lambda * a; });
}

DiscreteDistribution mix(std::span<const DiscreteDistribution> xs, std::span<const double> ws) {
  if (xs.size() != ws.size() || xs.empty()) {
    throw std::invalid_argument("mix: mismatched lengths");
  }
  for (double w : ws) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("mix: weights must be non-negative");
  }
  if (std::abs(total_weight(ws) - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("mix: weights must sum to 1");
  }
  std::vector<double> atoms;
  std::vector<double> weights;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < xs[i].size(); ++j) {
      atoms.push_back(xs[i].atoms()[j]);
      weights.push_back(ws[i] * xs[i].weights()[j]);
    }
  }
  return rebuild(std::move(atoms), std::move(weights));
}

double mean(const DiscreteDistribution& x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x.atoms()[i] * x.weights()[i];
  return sum;
}

// ---------------------------------------------------------------------------
// DistributionFamily

DistributionFamily::DistributionFamily(std::string label, std::vector<DiscreteDistribution> members)
    : label_(std::move(label)), horizon_(members.size()) {
  source_ = std::move(members);
}

DistributionFamily::DistributionFamily(std::string label, Generator generator, std::size_t horizon)
    : label_(std::move(label)), horizon_(horizon) {
  if (!generator) throw std::invalid_argument("family: generator must be callable");
  source_ = std::move(generator);
}

DiscreteDistribution DistributionFamily::member(std::size_t n) const {
  if (n == 0 || n > horizon_) throw std::out_of_range("family: member index out of range");
  if (const auto* list = std::get_if<std::vector<DiscreteDistribution>>(&source_)) {
    return (*list)[n - 1];
  }
  return std::get<Generator>(source_)(n);
}

DistributionFamily DistributionFamily::truncated(std::size_t horizon) const {
  if (horizon > horizon_) throw std::invalid_argument("family: cannot extend horizon");
  DistributionFamily copy = *this;
  if (auto* list = std::get_if<std::vector<DiscreteDistribution>>(&copy.source_)) {
    list->erase(list->begin() + static_cast<std::ptrdiff_t>(horizon), list->end());
  }
  copy.horizon_ = horizon;
  return copy;
}

}  // namespace uirisk
