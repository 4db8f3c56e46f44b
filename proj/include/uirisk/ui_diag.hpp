#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uirisk/distortion.hpp"
#include "uirisk/distribution.hpp"
#include "uirisk/extended_real.hpp"

namespace uirisk {

enum class Verdict { ui, not_ui, inconclusive };

std::string to_string(Verdict v);

/// Levels 1 − 2^{−k}, k = 1..levels.
std::vector<double> dyadic_grid(int levels);

/// "dyadic:K" or a comma-separated list of levels. The result must be
/// strictly increasing inside (0, 1).
std::vector<double> parse_grid(const std::string& text);

struct EnvelopePoint {
  double p;
  /// sup over the family of (1−p) ES_p(|X|), (1−p) ES_p(X) and (1−p) ES_p(−X).
  double env_abs;
  double env_pos;
  double env_neg;
};

struct DvpResult {
  DistortionFunction h;
  /// The levels p_1..p_N used for the explicit terms.
  std::vector<double> levels;
  double g_one;
  /// 1 / g(1), which bounds sup ρ_h(|X|) over the family.
  double certified_bound;
  /// sup over the family of ρ_h(|X|), attained on the horizon.
  double attained_sup;
};

struct UIReport {
  std::string label;
  std::size_t horizon = 0;
  std::vector<EnvelopePoint> envelope;
  /// env_abs lies between max(env_pos, env_neg) and b·max(env_pos, env_neg)
  /// at every level, with b the folding bound of h_p.
  bool crosscheck_ok = true;
  Verdict verdict = Verdict::inconclusive;
  std::string reason;
  std::optional<DvpResult> construction;
};

/// Envelopes of the tail functional over the family, with a verdict:
///  UI when the three finest env_abs values strictly decrease, the finest is
///  below τ = 1e−3 (env_abs at the coarsest level + 1), and the distortion
///  construction succeeds; not-UI when env_abs >= τ at every level;
///  inconclusive otherwise.
UIReport tail_envelope(const DistributionFamily& family, const std::vector<double>& grid);

inline constexpr int kDvpTerms = 20;

/// Distortion h = g / g(1), g(t) = Σ_{n<=20} min(t, 1 − p_n) + Σ_{n>20} min(t, s 2^{−n}).
///
/// p_n is the smallest level 1 − 2^{−k} (k <= 52) with 1 − p_n < 2^{−n} and
/// sup (1−p_n) ES_{p_n}(|X|) < 2^{−n}. The geometric tail uses s = 1/(2 max(B, 1))
/// with B the largest |atom| on the horizon, so each tail term also stays
/// below 2^{−n} and sup ρ_h(|X|) < 1/g(1) holds with no truncation residual.
/// Throws std::runtime_error("family fails UI premise") when some p_n cannot be found.
DvpResult dvp_distortion(const DistributionFamily& family);

/// Running supremum sup_{m<=n} value(m) tracked at checkpoints n = 1, 2, 4, ..., N.
struct GrowthReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::pair<std::size_t, double>> checkpoints;
  double sup = 0.0;
  std::string reason;
};

/// Divergent (not-UI) when the supremum exceeds 1e6 or the last three
/// checkpoint increments are positive with each at least 0.75 of the one
/// before; bounded (UI) when the geometrically extrapolated remainder is at
/// most 1e−3 (1 + sup); inconclusive otherwise.
GrowthReport monitor_growth(std::size_t horizon, const std::function<double(std::size_t)>& value);

/// The same rule applied to precomputed (n, running sup) checkpoints.
GrowthReport classify_growth(std::vector<std::pair<std::size_t, double>> checkpoints);

/// Boundedness of sup_n ρ_h(|X_n|). Requires h in D_c, else throws
/// std::invalid_argument("test distortion is expectation-dominated").
GrowthReport ui_from_distortion(const DistributionFamily& family, const DistortionFunction& h);

struct PairReport {
  DistortionFunction ell;
  GrowthReport upper;  ///< sup ρ_g(X_n)
  GrowthReport lower;  ///< sup ρ_f(−X_n)
  Verdict verdict = Verdict::inconclusive;
};

/// One-sided test with ρ_g(X) and ρ_f(−X); both g and f must lie in D_c.
/// Also forms ℓ = g ∧ f, which lies in D_c as well.
PairReport ui_from_distortion_pair(const DistributionFamily& family, const DistortionFunction& g,
                                   const DistortionFunction& f);

struct FinitenessReport {
  bool expectation_dominated = false;
  /// The domination constant lim h(t)/t (infinite when not dominated).
  ExtendedReal constant;
  /// Not dominated: the comonotone witness Σ_{n<=terms} 2^{−n} X_{t_n}.
  std::optional<DiscreteDistribution> witness;
  double witness_value = 0.0;
  int terms = 0;
  bool threshold_reached = false;
  std::vector<double> levels;
};

/// Classification of ρ_h by its slope at 0. In the unbounded case the witness
/// uses X_t = (t h(t))^{−1/2} 1{U < t}, with ρ_h(X_t) = (h(t)/t)^{1/2}, and
/// levels t_n with h(t_n)/t_n > 4^n; terms are added until the value exceeds
/// `threshold` or the next level would underflow.
FinitenessReport classify_finiteness(const DistortionFunction& h, double threshold = 10.0);

/// Boundedness of sup_n E[φ(|X_n|)] over the horizon: true, false, or
/// nullopt when the growth monitor is inconclusive.
std::optional<bool> dvp_phi_check(const DistributionFamily& family, const std::function<double(double)>& phi);

}  // namespace uirisk
