#include "uirisk/risk_measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace uirisk {

namespace {

constexpr double kProbabilityTolerance = 1e-12;

void check_level(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("level out of range");
}

// ∫ −log u du = u − u log u, with the value 0 at u = 0.
double neg_log_antiderivative(double u) { return u <= 0.0 ? 0.0 : u - u * std::log(u); }

}  // namespace

double choquet(const DistortionFunction& h, const DiscreteDistribution& x) {
  const auto a = x.atoms();
  const auto tail = x.upper_tail();
  double value = a[0];
  for (std::size_t j = 1; j < a.size(); ++j) value += (a[j] - a[j - 1]) * h(tail[j]);
  return value;
}

double choquet_quantile_form(const DistortionFunction& h, const DiscreteDistribution& x) {
  const auto a = x.atoms();
  const auto tail = x.upper_tail();
  double value = 0.0;
  double upper = h(tail[0]);
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double lower = h(tail[j + 1]);
    value += a[j] * (upper - lower);
    upper = lower;
  }
  return value;
}

double es(const DiscreteDistribution& x, double p) {
  check_level(p);
  const auto a = x.atoms();
  const auto w = x.weights();
  const auto tail = x.upper_tail();
  const double mass = 1.0 - p;
  double sum = 0.0;
  for (std::size_t j = a.size(); j-- > 0;) {
    const double above = tail[j + 1];
    if (above >= mass) break;
    sum += a[j] * std::min(w[j], mass - above);
  }
  return sum / mass;
}

double es_folded(const DiscreteDistribution& x, double p) { return es(fold(x), p); }

double es_sup_bruteforce(std::span<const double> values, double p) {
  check_level(p);
  const std::size_t n = values.size();
  if (n == 0 || n > 16) throw std::invalid_argument("es_sup_bruteforce: need 1 <= n <= 16 values");
  const double k_real = (1.0 - p) * static_cast<double>(n);
  const double k_round = std::round(k_real);
  if (std::abs(k_real - k_round) > 1e-9 || k_round < 1.0) {
    throw std::invalid_argument("es_sup_bruteforce: (1 - p) n must be a positive integer");
  }
  const int k = static_cast<int>(k_round);
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) s += values[i];
    }
    best = std::max(best, s / k);
  }
  return best;
}

double ies_direct(const DiscreteDistribution& x) {
  // Atom a_j occupies upper levels u in (P(X > a_j), P(X >= a_j)], where the
  // weight −log(1−q) becomes −log u.
  const auto a = x.atoms();
  const auto tail = x.upper_tail();
  double value = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    value += a[j] * (neg_log_antiderivative(tail[j]) - neg_log_antiderivative(tail[j + 1]));
  }
  return value;
}

DiscreteDistribution ies_counterexample_law(std::size_t bulk_cells, int tail_octaves) {
  if (bulk_cells < 2) throw std::invalid_argument("ies_counterexample_law: need at least two bulk cells");
  if (tail_octaves < 1 || tail_octaves > 900) {
    throw std::invalid_argument("ies_counterexample_law: tail_octaves out of range");
  }
  // ∫_0^q 2 / (s log²(s/2)) ds = −2 / log(q/2).
  auto antiderivative = [](double q) { return q <= 0.0 ? 0.0 : -2.0 / std::log(q / 2.0); };
  std::vector<double> atoms;
  std::vector<double> weights;
  auto add_cell = [&](double lo, double hi) {
    atoms.push_back((antiderivative(hi) - antiderivative(lo)) / (hi - lo));
    weights.push_back(hi - lo);
  };
  const double width = 1.0 / static_cast<double>(bulk_cells);
  for (std::size_t i = bulk_cells; i >= 2; --i) {
    add_cell(static_cast<double>(i - 1) * width, i == bulk_cells ? 1.0 : static_cast<double>(i) * width);
  }
  constexpr int kSubcells = 16;
  for (int k = 0; k < tail_octaves; ++k) {
    const double hi = std::ldexp(width, -k);
    for (int s = 0; s < kSubcells; ++s) {
      const double top = hi * std::exp2(-static_cast<double>(s) / kSubcells);
      const double bottom = hi * std::exp2(-static_cast<double>(s + 1) / kSubcells);
      add_cell(bottom, top);
    }
  }
  const double residual = std::ldexp(width, -tail_octaves);
  atoms.push_back(antiderivative(residual) / residual);
  weights.push_back(residual);
  // Weights telescope to 1 up to rounding; renormalize before validation.
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return DiscreteDistribution(std::move(atoms), std::move(weights));
}

// ---------------------------------------------------------------------------
// StateVector and positions

StateVector::StateVector(std::vector<double> v) : values(std::move(v)) {
  if (values.empty()) throw std::invalid_argument("state vector: no cells");
  probabilities.assign(values.size(), 1.0 / static_cast<double>(values.size()));
}

StateVector::StateVector(std::vector<double> v, std::vector<double> p)
    : values(std::move(v)), probabilities(std::move(p)) {
  if (values.empty() || values.size() != probabilities.size()) {
    throw std::invalid_argument("state vector: values and probabilities differ in length");
  }
}

DiscreteDistribution StateVector::law() const {
  const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("state vector: probabilities must sum to 1");
  }
  std::vector<double> w = probabilities;
  for (double& x : w) x /= total;
  return DiscreteDistribution(values, std::move(w));
}

Position fold(const Position& x) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&x)) return fold(*d);
  StateVector s = std::get<StateVector>(x);
  for (double& v : s.values) v = std::abs(v);
  return s;
}

Position negate(const Position& x) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&x)) return negate(*d);
  StateVector s = std::get<StateVector>(x);
  for (double& v : s.values) v = -v;
  return s;
}

// ---------------------------------------------------------------------------
// RiskMeasure

RiskMeasure RiskMeasure::distortion(DistortionFunction h) { return RiskMeasure(measure::Distortion{std::move(h)}); }

RiskMeasure RiskMeasure::entropic(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("entropic: beta must be positive");
  return RiskMeasure(measure::Entropic{beta});
}

RiskMeasure RiskMeasure::scenario_sup(std::vector<std::vector<double>> scenarios) {
  if (scenarios.empty()) throw std::invalid_argument("scenario_sup: no scenarios");
  const std::size_t dim = scenarios.front().size();
  if (dim == 0) throw std::invalid_argument("scenario_sup: scenarios have no cells");
  for (const auto& q : scenarios) {
    if (q.size() != dim) throw std::invalid_argument("scenario_sup: scenarios differ in dimension");
    double total = 0.0;
    for (double v : q) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("scenario_sup: probabilities must be non-negative");
      }
      total += v;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      throw std::invalid_argument("scenario_sup: each scenario must sum to 1");
    }
  }
  return RiskMeasure(measure::ScenarioSup{std::move(scenarios)});
}

RiskMeasure RiskMeasure::capacity(std::size_t cells, std::vector<double> nu) {
  if (cells == 0 || cells > 20) throw std::invalid_argument("capacity: need 1 to 20 cells");
  const std::size_t full = (std::size_t{1} << cells) - 1;
  if (nu.size() != full + 1) throw std::invalid_argument("capacity: table must have 2^cells entries");
  if (std::abs(nu[0]) > kProbabilityTolerance || std::abs(nu[full] - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("capacity: need nu(empty) = 0 and nu(all) = 1");
  }
  for (std::size_t mask = 0; mask <= full; ++mask) {
    if (!std::isfinite(nu[mask])) throw std::invalid_argument("capacity: non-finite entry");
    for (std::size_t i = 0; i < cells; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      if (!(mask & bit) && nu[mask | bit] < nu[mask] - kProbabilityTolerance) {
        throw std::invalid_argument("capacity: nu must be monotone");
      }
    }
  }
  if (cells <= 12) {
    // Submodularity in its local form: marginal gains shrink as sets grow.
    for (std::size_t mask = 0; mask <= full; ++mask) {
      for (std::size_t i = 0; i < cells; ++i) {
        const std::size_t bi = std::size_t{1} << i;
        if (mask & bi) continue;
        for (std::size_t j = i + 1; j < cells; ++j) {
          const std::size_t bj = std::size_t{1} << j;
          if (mask & bj) continue;
          const double gain_small = nu[mask | bi] - nu[mask];
          const double gain_large = nu[mask | bi | bj] - nu[mask | bj];
          if (gain_large > gain_small + kProbabilityTolerance) {
            throw std::invalid_argument("capacity: nu must be submodular");
          }
        }
      }
    }
  }
  return RiskMeasure(measure::Capacity{cells, std::move(nu)});
}

RiskMeasure RiskMeasure::kusuoka_sup(std::vector<DistortionFunction> members) {
  if (members.empty()) throw std::invalid_argument("kusuoka_sup: no members");
  for (const auto& h : members) {
    if (!h.is_concave()) throw std::invalid_argument("kusuoka_sup: every member must be concave");
  }
  return RiskMeasure(measure::KusuokaSup{std::move(members)});
}

std::string RiskMeasure::name() const {
  static const char* names[] = {"distortion", "entropic", "scenario_sup", "capacity", "kusuoka_sup"};
  return names[spec_.index()];
}

bool RiskMeasure::needs_state_space() const noexcept {
  return std::holds_alternative<measure::ScenarioSup>(spec_) || std::holds_alternative<measure::Capacity>(spec_);
}

std::size_t RiskMeasure::dimension() const noexcept {
  if (const auto* s = std::get_if<measure::ScenarioSup>(&spec_)) return s->scenarios.front().size();
  if (const auto* c = std::get_if<measure::Capacity>(&spec_)) return c->cells;
  return 0;
}

namespace {

const StateVector& state_vector_for(const RiskMeasure& rho, const Position& x) {
  const auto* s = std::get_if<StateVector>(&x);
  if (!s) throw std::invalid_argument(rho.name() + ": position must be a state vector on the measure's space");
  if (s->size() != rho.dimension()) throw std::invalid_argument(rho.name() + ": dimension mismatch");
  return *s;
}

DiscreteDistribution law_of(const Position& x) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&x)) return *d;
  return std::get<StateVector>(x).law();
}

double entropic_value(double beta, const DiscreteDistribution& x) {
  const auto a = x.atoms();
  const auto w = x.weights();
  const double top = beta * x.max();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * std::exp(beta * a[i] - top);
  return (top + std::log(s)) / beta;
}

double capacity_value(const measure::Capacity& c, const StateVector& x) {
  std::vector<std::size_t> order(c.cells);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&x](std::size_t i, std::size_t j) { return x.values[i] > x.values[j]; });
  double value = 0.0;
  std::size_t mask = 0;
  double previous = 0.0;
  for (std::size_t i : order) {
    mask |= std::size_t{1} << i;
    value += x.values[i] * (c.nu[mask] - previous);
    previous = c.nu[mask];
  }
  return value;
}

}  // namespace

ExtendedReal evaluate(const RiskMeasure& rho, const Position& x) {
  return std::visit(
      [&](const auto& m) -> ExtendedReal {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, measure::Distortion>) {
          return choquet(m.h, law_of(x));
        } else if constexpr (std::is_same_v<M, measure::Entropic>) {
          return entropic_value(m.beta, law_of(x));
        } else if constexpr (std::is_same_v<M, measure::ScenarioSup>) {
          const StateVector& s = state_vector_for(rho, x);
          double best = -std::numeric_limits<double>::infinity();
          for (const auto& q : m.scenarios) {
            best = std::max(best, std::inner_product(q.begin(), q.end(), s.values.begin(), 0.0));
          }
          return best;
        } else if constexpr (std::is_same_v<M, measure::Capacity>) {
          return capacity_value(m, state_vector_for(rho, x));
        } else {
          const DiscreteDistribution law = law_of(x);
          double best = -std::numeric_limits<double>::infinity();
          for (const auto& h : m.members) best = std::max(best, choquet(h, law));
          return best;
        }
      },
      rho.spec());
}

}  // namespace uirisk
