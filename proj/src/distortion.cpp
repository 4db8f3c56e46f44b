#include "uirisk/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace uirisk {

namespace distortion {

double tail_value(const GeometricTail& tail, double t) {
  if (t <= 0.0) return 0.0;
  // Terms with scale·2^{−n} >= t contribute t each; the rest form a geometric
  // series. n0 is the first index whose cap falls below t.
  int n0 = tail.first_index;
  const double guess = std::floor(std::log2(tail.scale / t)) + 1.0;
  if (guess > n0) n0 = static_cast<int>(std::min(guess, 4096.0));
  while (n0 > tail.first_index && std::ldexp(tail.scale, -(n0 - 1)) < t) --n0;
  while (std::ldexp(tail.scale, -n0) >= t) ++n0;
  return static_cast<double>(n0 - tail.first_index) * t + std::ldexp(tail.scale, 1 - n0);
}

}  // namespace distortion

namespace {

constexpr int kGridCells = 2048;
constexpr double kConcavityTolerance = 1e-10;
constexpr double kEndpointTolerance = 1e-12;

double clamp_level(double t) {
  if (std::isnan(t) || t < -1e-12 || t > 1.0 + 1e-12) {
    throw std::invalid_argument("distortion: argument outside [0, 1]");
  }
  return std::clamp(t, 0.0, 1.0);
}

double raw_value(const distortion::Spec& spec, double t);

double sum_numerator(const distortion::NormalizedSum& sum, double t) {
  double g = 0.0;
  for (std::size_t i = 0; i < sum.components.size(); ++i) {
    g += sum.coefficients[i] * sum.components[i](t);
  }
  if (sum.tail) g += distortion::tail_value(*sum.tail, t);
  return g;
}

double raw_value(const distortion::Spec& spec, double t) {
  using namespace distortion;
  return std::visit(
      [t](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Identity>) {
          return t;
        } else if constexpr (std::is_same_v<S, EsClip>) {
          return std::min(t / (1.0 - s.p), 1.0);
        } else if constexpr (std::is_same_v<S, Power>) {
          return t <= 0.0 ? 0.0 : std::pow(t, s.alpha);
        } else if constexpr (std::is_same_v<S, Ies>) {
          if (t <= 0.0) return 0.0;
          if (t >= 1.0) return 1.0;
          return t * (1.0 - std::log(t));
        } else if constexpr (std::is_same_v<S, PiecewiseLinear>) {
          auto it = std::upper_bound(s.t.begin(), s.t.end(), t);
          if (it == s.t.end()) return s.v.back();
          const std::size_t j = static_cast<std::size_t>(it - s.t.begin());
          const double w = (t - s.t[j - 1]) / (s.t[j] - s.t[j - 1]);
          return s.v[j - 1] + w * (s.v[j] - s.v[j - 1]);
        } else if constexpr (std::is_same_v<S, NormalizedSum>) {
          return sum_numerator(s, t);  // normalized by the caller
        } else {
          return std::min(s.parts[0](t), s.parts[1](t));
        }
      },
      spec);
}

void collect_kinks(const distortion::Spec& spec, std::vector<double>& out) {
  using namespace distortion;
  std::visit(
      [&out](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, EsClip>) {
          out.push_back(1.0 - s.p);
        } else if constexpr (std::is_same_v<S, PiecewiseLinear>) {
          for (std::size_t i = 1; i + 1 < s.t.size(); ++i) out.push_back(s.t[i]);
        } else if constexpr (std::is_same_v<S, NormalizedSum>) {
          for (const auto& c : s.components) {
            auto k = c.kinks();
            out.insert(out.end(), k.begin(), k.end());
          }
          if (s.tail) {
            for (int n = s.tail->first_index; n < s.tail->first_index + 64; ++n) {
              const double cap = std::ldexp(s.tail->scale, -n);
              if (cap > 0.0 && cap < 1.0) out.push_back(cap);
            }
          }
        } else if constexpr (std::is_same_v<S, PointwiseMin>) {
          for (const auto& c : s.parts) {
            auto k = c.kinks();
            out.insert(out.end(), k.begin(), k.end());
          }
        }
      },
      spec);
}

DistortionFunction::Kind kind_of(const distortion::Spec& spec) {
  using K = DistortionFunction::Kind;
  static constexpr K kinds[] = {K::identity,         K::es_clip,        K::power,        K::ies,
                                K::piecewise_linear, K::normalized_sum, K::pointwise_min};
  return kinds[spec.index()];
}

}  // namespace

struct DistortionFunction::Node {
  distortion::Spec spec;
  double normalizer = 1.0;
  double half = 0.5;
  bool concave = false;
  std::vector<double> kinks;

  double value(double t) const {
    const double raw = raw_value(spec, t);
    return normalizer == 1.0 ? raw : raw / normalizer;
  }
};

DistortionFunction::DistortionFunction(distortion::Spec spec) {
  auto node = std::make_shared<Node>();
  node->spec = std::move(spec);
  if (const auto* sum = std::get_if<distortion::NormalizedSum>(&node->spec)) {
    node->normalizer = sum_numerator(*sum, 1.0);
    if (!(node->normalizer > 0.0) || !std::isfinite(node->normalizer)) {
      throw std::invalid_argument("distortion: normalized_sum has non-positive total");
    }
  }
  collect_kinks(node->spec, node->kinks);
  std::sort(node->kinks.begin(), node->kinks.end());
  node->kinks.erase(std::unique(node->kinks.begin(), node->kinks.end()), node->kinks.end());

  // Shape checks on the grid i/2048 refined with all kinks.
  std::vector<double> grid;
  grid.reserve(kGridCells + 1 + node->kinks.size());
  for (int i = 0; i <= kGridCells; ++i) grid.push_back(static_cast<double>(i) / kGridCells);
  grid.insert(grid.end(), node->kinks.begin(), node->kinks.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = node->value(grid[i]);

  if (std::abs(values.front()) > kEndpointTolerance || std::abs(values.back() - 1.0) > kEndpointTolerance) {
    throw std::invalid_argument("distortion: need h(0) = 0 and h(1) = 1");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1] - kEndpointTolerance) {
      throw std::invalid_argument("distortion: h must be non-decreasing");
    }
  }
  bool concave = true;
  for (std::size_t i = 1; i + 1 < grid.size() && concave; ++i) {
    const double chord = values[i - 1] + (values[i + 1] - values[i - 1]) * (grid[i] - grid[i - 1]) /
                                             (grid[i + 1] - grid[i - 1]);
    if (values[i] < chord - kConcavityTolerance) concave = false;
  }
  node->concave = concave;
  node->half = node->value(0.5);
  node_ = std::move(node);
}

DistortionFunction DistortionFunction::identity() { return DistortionFunction(distortion::Identity{}); }

DistortionFunction DistortionFunction::es_clip(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("es_clip: level p must lie in (0, 1)");
  return DistortionFunction(distortion::EsClip{p});
}

DistortionFunction DistortionFunction::power(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("power: alpha must lie in (0, 1]");
  return DistortionFunction(distortion::Power{alpha});
}

DistortionFunction DistortionFunction::ies() { return DistortionFunction(distortion::Ies{}); }

DistortionFunction DistortionFunction::piecewise_linear(std::vector<double> t, std::vector<double> v) {
  if (t.size() < 2 || t.size() != v.size()) {
    throw std::invalid_argument("piecewise_linear: need at least two aligned knots");
  }
  if (t.front() != 0.0 || t.back() != 1.0) {
    throw std::invalid_argument("piecewise_linear: knots must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw std::invalid_argument("piecewise_linear: knots must increase strictly");
  }
  return DistortionFunction(distortion::PiecewiseLinear{std::move(t), std::move(v)});
}

DistortionFunction DistortionFunction::normalized_sum(std::vector<double> coefficients,
                                                      std::vector<DistortionFunction> components,
                                                      std::optional<distortion::GeometricTail> tail) {
  if (coefficients.size() != components.size()) {
    throw std::invalid_argument("normalized_sum: coefficients and components differ in length");
  }
  if (components.empty() && !tail) throw std::invalid_argument("normalized_sum: no terms");
  for (double c : coefficients) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("normalized_sum: coefficients must be positive");
    }
  }
  if (tail && (!(tail->scale > 0.0) || !std::isfinite(tail->scale))) {
    throw std::invalid_argument("normalized_sum: tail scale must be positive");
  }
  return DistortionFunction(distortion::NormalizedSum{std::move(coefficients), std::move(components), tail});
}

DistortionFunction DistortionFunction::es_level_sum(const std::vector<double>& levels,
                                                    std::optional<distortion::GeometricTail> tail) {
  std::vector<double> coefficients;
  std::vector<DistortionFunction> components;
  for (double p : levels) {
    coefficients.push_back(1.0 - p);
    components.push_back(es_clip(p));
  }
  return normalized_sum(std::move(coefficients), std::move(components), tail);
}

DistortionFunction DistortionFunction::pointwise_min(DistortionFunction a, DistortionFunction b) {
  return DistortionFunction(distortion::PointwiseMin{{std::move(a), std::move(b)}});
}

double DistortionFunction::operator()(double t) const { return node_->value(clamp_level(t)); }

DistortionFunction::Kind DistortionFunction::kind() const noexcept { return kind_of(node_->spec); }

const distortion::Spec& DistortionFunction::spec() const noexcept { return node_->spec; }

bool DistortionFunction::is_concave() const noexcept { return node_->concave; }

double DistortionFunction::at_half() const noexcept { return node_->half; }

double DistortionFunction::normalizer() const noexcept { return node_->normalizer; }

std::vector<double> DistortionFunction::kinks() const { return node_->kinks; }

// ---------------------------------------------------------------------------

namespace {

ExtendedReal slope_of(const DistortionFunction& h) {
  using namespace distortion;
  return std::visit(
      [&h](const auto& s) -> ExtendedReal {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Identity>) {
          return 1.0;
        } else if constexpr (std::is_same_v<S, EsClip>) {
          return 1.0 / (1.0 - s.p);
        } else if constexpr (std::is_same_v<S, Power>) {
          return s.alpha < 1.0 ? ExtendedReal::infinity() : ExtendedReal(1.0);
        } else if constexpr (std::is_same_v<S, Ies>) {
          return ExtendedReal::infinity();
        } else if constexpr (std::is_same_v<S, PiecewiseLinear>) {
          return s.v[1] / s.t[1];
        } else if constexpr (std::is_same_v<S, NormalizedSum>) {
          if (s.tail) return ExtendedReal::infinity();
          ExtendedReal total = 0.0;
          for (std::size_t i = 0; i < s.components.size(); ++i) {
            total = total + s.coefficients[i] * slope_of(s.components[i]);
          }
          return (1.0 / h.normalizer()) * total;
        } else {
          return min(slope_of(s.parts[0]), slope_of(s.parts[1]));
        }
      },
      h.spec());
}

}  // namespace

ExtendedReal slope_limit(const DistortionFunction& h) {
  if (!h.is_concave()) throw std::domain_error("slope limit undefined for non-concave h");
  return slope_of(h);
}

bool is_Dc(const DistortionFunction& h) {
  return h.is_concave() && slope_limit(h).is_positive_infinity();
}

ExtendedReal expectation_domination_constant(const DistortionFunction& h) { return slope_limit(h); }

}  // namespace uirisk
