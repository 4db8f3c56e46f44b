#include "uirisk/ui_diag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "uirisk/folding.hpp"
#include "uirisk/parallel.hpp"
#include "uirisk/risk_measure.hpp"

namespace uirisk {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ui:
      return "UI";
    case Verdict::not_ui:
      return "not-UI";
    case Verdict::inconclusive:
      break;
  }
  return "inconclusive";
}

std::vector<double> dyadic_grid(int levels) {
  if (levels < 1 || levels > 52) throw std::invalid_argument("grid: dyadic level count must lie in [1, 52]");
  std::vector<double> grid;
  for (int k = 1; k <= levels; ++k) grid.push_back(1.0 - std::ldexp(1.0, -k));
  return grid;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.rfind("dyadic:", 0) == 0) {
    const std::string count = text.substr(7);
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != count.size()) throw std::invalid_argument("grid: malformed dyadic level count");
    return dyadic_grid(k);
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) throw std::invalid_argument("grid: malformed level '" + item + "'");
    grid.push_back(p);
  }
  if (grid.empty()) throw std::invalid_argument("grid: no levels");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw std::invalid_argument("grid: levels must lie in (0, 1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("grid: levels must increase strictly");
  }
  return grid;
}

namespace {

std::vector<DiscreteDistribution> materialize(const DistributionFamily& family) {
  if (family.horizon() == 0) throw std::invalid_argument("empty family");
  std::vector<std::optional<DiscreteDistribution>> slots(family.horizon());
  parallel_for(family.horizon(), [&](std::size_t i) { slots[i] = family.member(i + 1); });
  std::vector<DiscreteDistribution> members;
  members.reserve(slots.size());
  for (auto& s : slots) members.push_back(std::move(*s));
  return members;
}

// Per-level sup over members of (1−p) ES_p applied to |X|, X and −X.
std::vector<EnvelopePoint> envelopes(const std::vector<DiscreteDistribution>& members,
                                     const std::vector<double>& grid) {
  const std::size_t levels = grid.size();
  std::vector<std::vector<EnvelopePoint>> per_member(members.size());
  parallel_for(members.size(), [&](std::size_t i) {
    const DiscreteDistribution& x = members[i];
    const DiscreteDistribution ax = fold(x);
    const DiscreteDistribution nx = negate(x);
    auto& row = per_member[i];
    row.resize(levels);
    for (std::size_t k = 0; k < levels; ++k) {
      const double p = grid[k];
      const double m = 1.0 - p;
      row[k] = {p, m * es(ax, p), m * es(x, p), m * es(nx, p)};
    }
  });
  std::vector<EnvelopePoint> env(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    env[k] = per_member[0][k];
    for (const auto& row : per_member) {
      env[k].env_abs = std::max(env[k].env_abs, row[k].env_abs);
      env[k].env_pos = std::max(env[k].env_pos, row[k].env_pos);
      env[k].env_neg = std::max(env[k].env_neg, row[k].env_neg);
    }
  }
  return env;
}

std::optional<DvpResult> try_dvp(const DistributionFamily& family, std::string& failure) {
  try {
    return dvp_distortion(family);
  } catch (const std::runtime_error& e) {
    failure = e.what();
    return std::nullopt;
  }
}

}  // namespace

UIReport tail_envelope(const DistributionFamily& family, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("grid: no levels");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw std::invalid_argument("grid: levels must lie in (0, 1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("grid: levels must increase strictly");
  }
  const auto members = materialize(family);
  UIReport report;
  report.label = family.label();
  report.horizon = family.horizon();
  report.envelope = envelopes(members, grid);

  for (const auto& e : report.envelope) {
    const double side = std::max(e.env_pos, e.env_neg);
    const double b = bound_b(DistortionFunction::es_clip(e.p)).value();
    const double tol = 1e-12 * (1.0 + e.env_abs);
    if (e.env_abs < side - tol || e.env_abs > b * side + tol) report.crosscheck_ok = false;
  }

  const auto& env = report.envelope;
  const double tau = 1e-3 * (env.front().env_abs + 1.0);
  const std::size_t n = env.size();
  const bool decreasing =
      n >= 3 && env[n - 1].env_abs < env[n - 2].env_abs && env[n - 2].env_abs < env[n - 3].env_abs;
  const double lowest = std::min_element(env.begin(), env.end(), [](const auto& a, const auto& b) {
                          return a.env_abs < b.env_abs;
                        })->env_abs;
  if (decreasing && env.back().env_abs < tau) {
    std::string failure;
    report.construction = try_dvp(family, failure);
    if (report.construction) {
      report.verdict = Verdict::ui;
      report.reason = "envelope vanishes at the finest levels and a D_c distortion bounds the family";
    } else {
      report.verdict = Verdict::inconclusive;
      report.reason = "envelope small but distortion construction failed: " + failure;
    }
  } else if (lowest >= tau) {
    report.verdict = Verdict::not_ui;
    report.reason = "envelope bounded below by a positive constant across the grid";
  } else {
    report.verdict = Verdict::inconclusive;
    report.reason = "envelope neither vanishing nor bounded away from zero on the grid";
  }
  return report;
}

DvpResult dvp_distortion(const DistributionFamily& family) {
  const auto members = materialize(family);
  constexpr int kMaxLevel = 52;
  const std::vector<double> grid = dyadic_grid(kMaxLevel);
  const auto env = envelopes(members, grid);

  std::vector<double> levels;
  for (int n = 1; n <= kDvpTerms; ++n) {
    const double cap = std::ldexp(1.0, -n);
    std::optional<double> found;
    for (int k = n + 1; k <= kMaxLevel; ++k) {
      if (env[static_cast<std::size_t>(k - 1)].env_abs < cap) {
        found = grid[static_cast<std::size_t>(k - 1)];
        break;
      }
    }
    if (!found) throw std::runtime_error("family fails UI premise");
    levels.push_back(*found);
  }
  double bound_abs = 0.0;
  for (const auto& x : members) bound_abs = std::max({bound_abs, std::abs(x.min()), std::abs(x.max())});
  const distortion::GeometricTail tail{1.0 / (2.0 * std::max(bound_abs, 1.0)), kDvpTerms + 1};

  DvpResult out{DistortionFunction::es_level_sum(levels, tail), levels, 0.0, 0.0, 0.0};
  out.g_one = out.h.normalizer();
  out.certified_bound = 1.0 / out.g_one;
  std::vector<double> values(members.size());
  parallel_for(members.size(), [&](std::size_t i) { values[i] = choquet(out.h, fold(members[i])); });
  out.attained_sup = *std::max_element(values.begin(), values.end());
  return out;
}

GrowthReport monitor_growth(std::size_t horizon, const std::function<double(std::size_t)>& value) {
  if (horizon == 0) throw std::invalid_argument("empty family");
  std::vector<double> values(horizon);
  parallel_for(horizon, [&](std::size_t i) { values[i] = value(i + 1); });

  GrowthReport r;
  std::vector<std::size_t> marks;
  for (std::size_t c = 1; c <= horizon; c *= 2) marks.push_back(c);
  if (marks.back() != horizon) marks.push_back(horizon);
  double running = values[0];
  std::size_t next = 0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    running = std::max(running, values[n - 1]);
    if (n == marks[next]) {
      r.checkpoints.emplace_back(n, running);
      ++next;
    }
  }
  return classify_growth(std::move(r.checkpoints));
}

GrowthReport classify_growth(std::vector<std::pair<std::size_t, double>> checkpoints) {
  if (checkpoints.empty()) throw std::invalid_argument("growth: no checkpoints");
  GrowthReport r;
  r.checkpoints = std::move(checkpoints);
  r.sup = r.checkpoints.back().second;

  // Increments per doubling of n, so a trailing partial segment compares fairly.
  std::vector<double> inc;
  for (std::size_t i = 1; i < r.checkpoints.size(); ++i) {
    const double span = std::log2(static_cast<double>(r.checkpoints[i].first) /
                                  static_cast<double>(r.checkpoints[i - 1].first));
    inc.push_back((r.checkpoints[i].second - r.checkpoints[i - 1].second) / span);
  }

  if (!std::isfinite(r.sup) || r.sup > 1e6) {
    r.verdict = Verdict::not_ui;
    r.reason = "envelope exceeds 1e6";
    return r;
  }
  const std::size_t m = inc.size();
  if (m >= 3) {
    bool sustained = true;
    for (std::size_t i = m - 3; i < m; ++i) {
      if (!(inc[i] > 0.0)) sustained = false;
      if (i > 0 && inc[i] < 0.75 * inc[i - 1]) sustained = false;
    }
    if (sustained) {
      r.verdict = Verdict::not_ui;
      r.reason = "envelope keeps growing without saturation";
      return r;
    }
  }
  double remainder = 0.0;
  if (m >= 1 && inc[m - 1] > 0.0) {
    const double ratio = m >= 2 && inc[m - 2] > 0.0 ? inc[m - 1] / inc[m - 2] : 1.0;
    remainder = ratio < 0.75 ? inc[m - 1] * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
  }
  if (remainder <= 1e-3 * (1.0 + std::abs(r.sup))) {
    r.verdict = Verdict::ui;
    r.reason = "envelope saturates on the horizon";
  } else {
    r.verdict = Verdict::inconclusive;
    r.reason = "envelope still growing slowly at the horizon";
  }
  return r;
}

namespace {

void require_dc(const DistortionFunction& h) {
  if (!is_Dc(h)) throw std::invalid_argument("test distortion is expectation-dominated");
}

}  // namespace

GrowthReport ui_from_distortion(const DistributionFamily& family, const DistortionFunction& h) {
  require_dc(h);
  return monitor_growth(family.horizon(), [&](std::size_t n) { return choquet(h, fold(family.member(n))); });
}

PairReport ui_from_distortion_pair(const DistributionFamily& family, const DistortionFunction& g,
                                   const DistortionFunction& f) {
  require_dc(g);
  require_dc(f);
  PairReport r{DistortionFunction::pointwise_min(g, f), {}, {}, Verdict::inconclusive};
  r.upper = monitor_growth(family.horizon(), [&](std::size_t n) { return choquet(g, family.member(n)); });
  r.lower = monitor_growth(family.horizon(), [&](std::size_t n) { return choquet(f, negate(family.member(n))); });
  if (r.upper.verdict == Verdict::not_ui || r.lower.verdict == Verdict::not_ui) {
    r.verdict = Verdict::not_ui;
  } else if (r.upper.verdict == Verdict::ui && r.lower.verdict == Verdict::ui) {
    r.verdict = Verdict::ui;
  }
  return r;
}

FinitenessReport classify_finiteness(const DistortionFunction& h, double threshold) {
  FinitenessReport r;
  r.constant = slope_limit(h);
  if (r.constant.is_finite()) {
    r.expectation_dominated = true;
    return r;
  }
  // Smallest representable level we are willing to use for a witness term.
  constexpr double kSmallestLevel = 1e-300;
  constexpr int kMaxTerms = 64;
  std::vector<double> coefficients;  // 2^{−n} (t_n h(t_n))^{−1/2}
  double t = 0.5;
  for (int n = 1; n <= kMaxTerms; ++n) {
    const double target = std::ldexp(1.0, 2 * n);
    while (t >= kSmallestLevel && h(t) / t <= target) t *= 0.5;
    if (t < kSmallestLevel) break;
    r.levels.push_back(t);
    coefficients.push_back(std::ldexp(1.0, -n) / std::sqrt(t * h(t)));

    // U in [t_{m+1}, t_m) carries the partial sum of the first m terms.
    std::vector<double> atoms{0.0};
    std::vector<double> weights{1.0 - r.levels[0]};
    double partial = 0.0;
    for (std::size_t m = 0; m < r.levels.size(); ++m) {
      partial += coefficients[m];
      atoms.push_back(partial);
      weights.push_back(r.levels[m] - (m + 1 < r.levels.size() ? r.levels[m + 1] : 0.0));
    }
    r.witness = DiscreteDistribution(std::move(atoms), std::move(weights));
    r.witness_value = choquet(h, *r.witness);
    r.terms = n;
    if (r.witness_value > threshold) {
      r.threshold_reached = true;
      break;
    }
  }
  return r;
}

std::optional<bool> dvp_phi_check(const DistributionFamily& family, const std::function<double(double)>& phi) {
  const GrowthReport g = monitor_growth(family.horizon(), [&](std::size_t n) {
    const DiscreteDistribution x = family.member(n);
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) e += x.weights()[i] * phi(std::abs(x.atoms()[i]));
    return e;
  });
  if (g.verdict == Verdict::ui) return true;
  if (g.verdict == Verdict::not_ui) return false;
  return std::nullopt;
}

}  // namespace uirisk
