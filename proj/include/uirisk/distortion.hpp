#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "uirisk/extended_real.hpp"

namespace uirisk {

class DistortionFunction;

namespace distortion {

struct Identity {};

/// h_p(t) = min(t / (1 − p), 1), the Expected Shortfall distortion.
struct EsClip {
  double p;
};

/// h(t) = t^alpha, alpha in (0, 1].
struct Power {
  double alpha;
};

/// h(t) = t (1 − log t), extended by h(0) = 0. Distortion of the integrated ES.
struct Ies {};

/// Continuous piecewise-linear h through (t[i], v[i]); t[0] = 0, t.back() = 1.
struct PiecewiseLinear {
  std::vector<double> t;
  std::vector<double> v;
};

/// Σ_{n >= first_index} min(t, scale · 2^{−n}). An infinite sum kept in
/// closed form; it contributes an unbounded slope at 0.
struct GeometricTail {
  double scale;
  int first_index;
};

/// h = g / g(1) with g(t) = Σ coefficients[i] · components[i](t) + tail(t).
struct NormalizedSum {
  std::vector<double> coefficients;
  std::vector<DistortionFunction> components;
  std::optional<GeometricTail> tail;
};

/// h = min(parts[0], parts[1]).
struct PointwiseMin {
  std::vector<DistortionFunction> parts;
};

using Spec = std::variant<Identity, EsClip, Power, Ies, PiecewiseLinear, NormalizedSum, PointwiseMin>;

/// Value of the geometric tail sum at t in [0, 1].
double tail_value(const GeometricTail& tail, double t);

}  // namespace distortion

/// A distortion function h: [0,1] -> [0,1], non-decreasing with h(0) = 0 and
/// h(1) = 1. Immutable; copies share the underlying representation.
///
/// Concavity is established at construction by a chord test on a 2048-cell
/// grid refined with every kink of h, and cached together with h(1/2).
class DistortionFunction {
 public:
  enum class Kind { identity, es_clip, power, ies, piecewise_linear, normalized_sum, pointwise_min };

  static DistortionFunction identity();
  static DistortionFunction es_clip(double p);
  static DistortionFunction power(double alpha);
  static DistortionFunction ies();
  static DistortionFunction piecewise_linear(std::vector<double> t, std::vector<double> v);
  static DistortionFunction normalized_sum(std::vector<double> coefficients,
                                           std::vector<DistortionFunction> components,
                                           std::optional<distortion::GeometricTail> tail = {});
  /// Σ (1 − p_n) h_{p_n}(t) = Σ min(t, 1 − p_n), normalized; the construction
  /// used to turn a sequence of ES levels into a single distortion.
  static DistortionFunction es_level_sum(const std::vector<double>& levels,
                                         std::optional<distortion::GeometricTail> tail = {});
  static DistortionFunction pointwise_min(DistortionFunction a, DistortionFunction b);

  double operator()(double t) const;

  Kind kind() const noexcept;
  const distortion::Spec& spec() const noexcept;
  bool is_concave() const noexcept;
  double at_half() const noexcept;
  /// Normalizing constant g(1) for normalized_sum, 1 otherwise.
  double normalizer() const noexcept;
  /// Kink locations in (0, 1), used to refine grids.
  std::vector<double> kinks() const;

 private:
  struct Node;
  explicit DistortionFunction(distortion::Spec spec);
  std::shared_ptr<const Node> node_;
};

/// lim_{t↓0} h(t)/t for concave h; +∞ is reported symbolically.
/// Throws std::domain_error("slope limit undefined for non-concave h").
ExtendedReal slope_limit(const DistortionFunction& h);

/// Membership in D_c: concave with h(t)/t → ∞ as t ↓ 0.
bool is_Dc(const DistortionFunction& h);

/// Smallest c with ρ_h <= c·E on non-negative losses (equals slope_limit).
ExtendedReal expectation_domination_constant(const DistortionFunction& h);

}  // namespace uirisk
