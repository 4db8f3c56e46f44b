#include "uirisk/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uirisk/parallel.hpp"
#include "uirisk/ui_diag.hpp"

namespace uirisk {

double w1(const DiscreteDistribution& f, const DiscreteDistribution& g) {
  const auto a = f.atoms();
  const auto b = g.atoms();
  const auto cf = f.cumulative();
  const auto cg = g.cumulative();
  double total = 0.0;
  double t = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const double next = std::min(cf[i], cg[j]);
    total += std::abs(a[i] - b[j]) * (next - t);
    t = next;
    if (cf[i] <= next) ++i;
    if (cg[j] <= next) ++j;
  }
  return total;
}

CouplingReport comonotone_version(const DiscreteDistribution& fn, const DiscreteDistribution& fx, std::size_t m) {
  if (m == 0) throw std::invalid_argument("comonotone_version: grid size must be positive");
  CouplingReport r;
  r.w1 = w1(fn, fx);
  r.grid_size = m;
  r.x_star.resize(m);
  r.x.resize(m);
  const QuantileFunction qn = fn.quantile();
  const QuantileFunction qx = fx.quantile();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    r.x_star[i] = qn(u);
    r.x[i] = qx(u);
    sum += std::abs(r.x_star[i] - r.x[i]);
  }
  r.grid_distance = sum / static_cast<double>(m);
  return r;
}

DiscreteDistribution quantile_average(const std::vector<DiscreteDistribution>& laws) {
  if (laws.empty()) throw std::invalid_argument("quantile_average: no laws");
  std::vector<double> cuts;
  for (const auto& law : laws) cuts.insert(cuts.end(), law.cumulative().begin(), law.cumulative().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<QuantileFunction> q;
  q.reserve(laws.size());
  for (const auto& law : laws) q.push_back(law.quantile());
  std::vector<double> atoms;
  std::vector<double> weights;
  double previous = 0.0;
  for (double c : cuts) {
    if (c <= previous) continue;
    double s = 0.0;
    for (const auto& qf : q) s += qf(c);
    atoms.push_back(s / static_cast<double>(laws.size()));
    weights.push_back(c - previous);
    previous = c;
  }
  return DiscreteDistribution(std::move(atoms), std::move(weights));
}

// ---------------------------------------------------------------------------

SampleGenerator SampleGenerator::pareto(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("pareto: alpha must exceed 1");
  return SampleGenerator(Kind::pareto, alpha);
}

SampleGenerator SampleGenerator::parse(const std::string& text) {
  if (text == "coin") return coin();
  if (text == "zero") return zero();
  if (text.rfind("pareto:", 0) == 0) {
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(text.substr(7), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - 7) throw std::invalid_argument("generator: malformed pareto index");
    return pareto(alpha);
  }
  throw std::invalid_argument("generator: unknown generator '" + text + "'");
}

double SampleGenerator::draw(std::mt19937_64& rng) const {
  switch (kind_) {
    case Kind::coin:
      return (rng() >> 63) ? 1.0 : -1.0;
    case Kind::pareto: {
      const double sign = (rng() >> 63) ? 1.0 : -1.0;
      return sign * std::pow(uniform01_open_left(rng), -1.0 / alpha_);
    }
    case Kind::zero:
      break;
  }
  return 0.0;
}

std::string SampleGenerator::name() const {
  switch (kind_) {
    case Kind::coin:
      return "coin";
    case Kind::pareto: {
      std::string s = std::to_string(alpha_);
      s.erase(s.find_last_not_of('0') + 1);
      if (s.back() == '.') s.pop_back();
      return "pareto:" + s;
    }
    case Kind::zero:
      break;
  }
  return "zero";
}

namespace {

bool infinite_on_l1(const RiskMeasure& rho) {
  if (const auto* d = std::get_if<measure::Distortion>(&rho.spec())) return is_Dc(d->h);
  if (const auto* k = std::get_if<measure::KusuokaSup>(&rho.spec())) {
    return std::any_of(k->members.begin(), k->members.end(), [](const auto& h) { return is_Dc(h); });
  }
  return false;
}

std::vector<std::size_t> dyadic_schedule(std::size_t n_max) {
  std::vector<std::size_t> s;
  for (std::size_t n = 1; n <= n_max; n *= 2) s.push_back(n);
  if (s.back() != n_max) s.push_back(n_max);
  return s;
}

}  // namespace

LlnReport lln_experiment(const LlnConfig& config, const RiskMeasure& rho, const RiskMeasure& rho_prime) {
  if (!infinite_on_l1(rho) || !infinite_on_l1(rho_prime)) {
    throw std::invalid_argument("lln_experiment: rho and rho' must not be finite on L1");
  }
  if (config.n_max == 0 || config.reps == 0) throw std::invalid_argument("lln_experiment: n_max and reps must be positive");
  if (config.deltas.empty()) throw std::invalid_argument("lln_experiment: no thresholds");
  const auto schedule = dyadic_schedule(config.n_max);
  const std::size_t nd = config.deltas.size();

  // exceed[r][c * nd + d]: replication r exceeds delta d at checkpoint c.
  std::vector<std::vector<char>> exceed(config.reps);
  std::vector<double> first_path;
  parallel_for(config.reps, [&](std::size_t r) {
    auto rng = make_rng(config.seed + r, "convergence.lln_experiment");
    auto& flags = exceed[r];
    flags.assign(schedule.size() * nd, 0);
    std::vector<double> path;
    if (r == 0) path.reserve(config.n_max);
    double sum = 0.0;
    std::size_t c = 0;
    for (std::size_t n = 1; n <= config.n_max; ++n) {
      const double x = config.generator.draw(rng);
      if (r == 0) path.push_back(x);
      sum += x;
      if (n == schedule[c]) {
        const double y = std::abs(sum / static_cast<double>(n));
        for (std::size_t d = 0; d < nd; ++d) flags[c * nd + d] = y > config.deltas[d];
        ++c;
      }
    }
    if (r == 0) first_path = std::move(path);
  });

  LlnReport report;
  report.deltas = config.deltas;
  std::vector<std::pair<std::size_t, double>> env_checkpoints;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < schedule.size(); ++c) {
    LlnRow row{schedule[c], std::vector<double>(nd, 0.0), 0.0, 0.0};
    for (std::size_t d = 0; d < nd; ++d) {
      std::size_t hits = 0;
      for (const auto& flags : exceed) hits += static_cast<std::size_t>(flags[c * nd + d]);
      row.exceedance[d] = static_cast<double>(hits) / static_cast<double>(config.reps);
    }
    const DiscreteDistribution law =
        from_samples(std::span<const double>(first_path.data(), schedule[c]));
    row.rho_env = evaluate(rho, law).to_double();
    row.rho_prime_env = evaluate(rho_prime, negate(law)).to_double();
    running = std::max({running, row.rho_env, row.rho_prime_env});
    env_checkpoints.emplace_back(schedule[c], running);
    report.rows.push_back(std::move(row));
  }
  report.hypothesis_violated = classify_growth(std::move(env_checkpoints)).verdict == Verdict::not_ui;
  return report;
}

// ---------------------------------------------------------------------------

EsConvergenceReport es_convergence_experiment(const std::vector<DiscreteDistribution>& sequence,
                                              const DiscreteDistribution& limit, const std::vector<double>& levels) {
  if (sequence.empty()) throw std::invalid_argument("es_convergence_experiment: empty sequence");
  if (levels.empty()) throw std::invalid_argument("es_convergence_experiment: no levels");
  EsConvergenceReport r;
  const DistortionFunction ies = DistortionFunction::ies();
  for (const auto& f : sequence) {
    r.ies_env_pos = std::max(r.ies_env_pos, choquet(ies, f));
    r.ies_env_neg = std::max(r.ies_env_neg, choquet(ies, negate(f)));
  }
  for (double p : levels) {
    const double target = es(limit, p);
    std::vector<double> errors;
    for (std::size_t n = 0; n < sequence.size(); ++n) {
      const double e = std::abs(es(sequence[n], p) - target);
      errors.push_back(e);
      r.rows.push_back({n + 1, p, e});
    }
    EsTrend trend{p, std::numeric_limits<double>::quiet_NaN(), 1.0};
    if (errors.size() > 1) {
      std::size_t steady = 0;
      for (std::size_t i = 1; i < errors.size(); ++i) steady += errors[i] <= errors[i - 1] ? 1 : 0;
      trend.monotone_fraction = static_cast<double>(steady) / static_cast<double>(errors.size() - 1);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (!(errors[i] > 0.0)) continue;
      const double lx = std::log(static_cast<double>(i + 1));
      const double ly = std::log(errors[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++count;
    }
    const double denom = static_cast<double>(count) * sxx - sx * sx;
    if (count >= 2 && denom > 0.0) trend.log_log_slope = (static_cast<double>(count) * sxy - sx * sy) / denom;
    r.trends.push_back(trend);
  }
  return r;
}

// ---------------------------------------------------------------------------

SubsequenceReport subsequence_extract(const DistributionFamily& family, int max_levels) {
  constexpr std::size_t kMaxHorizon = 4096;
  const std::size_t n = family.horizon();
  if (n == 0) throw std::invalid_argument("empty family");
  if (n > kMaxHorizon) throw std::invalid_argument("subsequence_extract: horizon above 4096");
  if (max_levels < 3 || max_levels > 60) throw std::invalid_argument("subsequence_extract: max_levels in [3, 60]");

  std::vector<std::optional<DiscreteDistribution>> slots(n);
  parallel_for(n, [&](std::size_t i) { slots[i] = family.member(i + 1); });
  std::vector<DiscreteDistribution> members;
  members.reserve(n);
  for (auto& s : slots) members.push_back(std::move(*s));

  std::vector<double> dist(n * n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = w1(members[i], members[j]);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) dist[i * n + j] = dist[j * n + i];
  }

  std::vector<std::size_t> cluster(n);
  for (std::size_t i = 0; i < n; ++i) cluster[i] = i;
  std::vector<std::size_t> indices;
  std::vector<double> radii;
  std::size_t previous = 0;  // 1-based; 0 means none yet
  for (int k = 1; k <= max_levels; ++k) {
    const double radius = std::ldexp(1.0, -k);
    std::vector<std::size_t> best_ball;
    for (std::size_t c : cluster) {
      std::vector<std::size_t> ball;
      for (std::size_t j : cluster) {
        if (dist[c * n + j] < radius) ball.push_back(j);
      }
      if (ball.size() > best_ball.size() || (ball.size() == best_ball.size() && ball.back() > best_ball.back())) {
        best_ball = std::move(ball);
      }
    }
    // Members are 0-based, so j >= previous means index j + 1 > previous.
    auto next = std::lower_bound(best_ball.begin(), best_ball.end(), previous);
    if (next == best_ball.end()) break;
    cluster = std::move(best_ball);
    previous = *next + 1;
    indices.push_back(previous);
    radii.push_back(radius);
  }
  if (indices.size() < 3) throw std::runtime_error("inconclusive at horizon");

  std::vector<DiscreteDistribution> chosen;
  std::vector<std::size_t> cluster_ids;
  for (std::size_t c : cluster) {
    chosen.push_back(members[c]);
    cluster_ids.push_back(c + 1);
  }
  SubsequenceReport r{indices, radii, cluster_ids, quantile_average(chosen), 0.0};
  for (std::size_t idx : indices) r.max_gap = std::max(r.max_gap, w1(members[idx - 1], r.candidate));
  return r;
}

}  // namespace uirisk
