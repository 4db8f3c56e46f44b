#include "uirisk/invest.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

#include "uirisk/convergence.hpp"
#include "uirisk/parallel.hpp"
#include "uirisk/random.hpp"

namespace uirisk {

Utility Utility::tanh(double a, double b) { return Utility(Kind::tanh, a, b); }

Utility Utility::linear(double a, double b) { return Utility(Kind::linear, a, b); }

Utility Utility::piecewise_linear(double a, double b, std::vector<double> knots_x, std::vector<double> knots_y) {
  if (knots_x.size() < 2 || knots_x.size() != knots_y.size()) {
    throw std::invalid_argument("utility: need at least two aligned knots");
  }
  double previous_slope = std::numeric_limits<double>::infinity();
  double lip = 0.0;
  for (std::size_t i = 1; i < knots_x.size(); ++i) {
    if (!(knots_x[i] > knots_x[i - 1])) throw std::invalid_argument("utility: knots must increase strictly");
    const double slope = (knots_y[i] - knots_y[i - 1]) / (knots_x[i] - knots_x[i - 1]);
    if (slope > previous_slope + 1e-12) throw std::invalid_argument("utility: piecewise v must be concave");
    previous_slope = slope;
    lip = std::max(lip, std::abs(slope));
  }
  Utility u(Kind::piecewise, a, b);
  u.kx_ = std::move(knots_x);
  u.ky_ = std::move(knots_y);
  u.lip_v_ = lip;
  return u;
}

double Utility::v(double s) const {
  switch (kind_) {
    case Kind::tanh:
      return std::tanh(s);
    case Kind::linear:
      return s;
    case Kind::piecewise:
      break;
  }
  std::size_t j = static_cast<std::size_t>(std::upper_bound(kx_.begin(), kx_.end(), s) - kx_.begin());
  j = std::clamp<std::size_t>(j, 1, kx_.size() - 1);
  const double w = (s - kx_[j - 1]) / (kx_[j] - kx_[j - 1]);
  return ky_[j - 1] + w * (ky_[j] - ky_[j - 1]);
}

std::string Utility::name() const {
  switch (kind_) {
    case Kind::tanh:
      return "tanh";
    case Kind::linear:
      return "linear";
    case Kind::piecewise:
      break;
  }
  return "piecewise_linear";
}

void InvestProblem::validate() const {
  if (n == 0) throw std::invalid_argument("invest: grid size n must be positive");
  if (!is_Dc(rho)) throw std::invalid_argument("invest: risk constraint distortion must lie in D_c");
  if (!is_Dc(price)) throw std::invalid_argument("invest: price distortion must lie in D_c");
  if (!std::isfinite(r0) || !std::isfinite(x0)) throw std::invalid_argument("invest: bounds must be finite");
  if (!std::isfinite(u.a()) || !std::isfinite(u.b())) throw std::invalid_argument("invest: a and b must be finite");
}

DiscreteDistribution default_background(std::size_t points) {
  if (points < 2) throw std::invalid_argument("default_background: need at least two points");
  std::vector<double> values(points);
  for (std::size_t i = 0; i < points; ++i) {
    values[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return DiscreteDistribution::uniform_over(values);
}

void check_monotone(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("invest: empty decision");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] < x[i - 1]) throw std::invalid_argument("invest: decision must be non-decreasing");
  }
}

namespace {

// φ(s) = E[u(−s, Y)].
double phi(const Utility& u, double s, const DiscreteDistribution& y) {
  const auto a = y.atoms();
  const auto w = y.weights();
  double total = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) total += w[j] * u(-s, a[j]);
  return total;
}

double objective_unchecked(const Utility& u, const std::vector<double>& x, const DiscreteDistribution& y) {
  double total = 0.0;
  for (double s : x) total += phi(u, s, y);
  return total / static_cast<double>(x.size());
}

// Coefficients c with ρ_h(uniform law on x) = Σ_k c_k x_k for ascending x.
std::vector<double> order_weights(const DistortionFunction& h, std::size_t n) {
  std::vector<double> c(n);
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double i = static_cast<double>(n - k);  // x_k is the i-th largest
    c[k] = h(i / dn) - h((i - 1.0) / dn);
  }
  return c;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Linear constraint data: alpha·x <= r0 and beta·x <= x0.
struct Feasible {
  std::vector<double> alpha;
  std::vector<double> beta;
  double r0;
  double x0;
  double alpha_sq;
  double beta_sq;
  double anchor;  // constant decision strictly inside when r0 + x0 > 0

  Feasible(const InvestProblem& prob)
      : alpha(order_weights(prob.rho, prob.n)), r0(prob.r0), x0(prob.x0), anchor(0.5 * (prob.r0 - prob.x0)) {
    // P(−X) with −X sorted ascending: its i-th largest entry is −x_(i-th smallest).
    const std::vector<double> g = order_weights(prob.price, prob.n);
    beta.resize(prob.n);
    for (std::size_t k = 0; k < prob.n; ++k) beta[k] = -g[prob.n - 1 - k];
    alpha_sq = dot(alpha, alpha);
    beta_sq = dot(beta, beta);
  }

  static void halfspace(std::vector<double>& x, const std::vector<double>& a, double sq, double bound) {
    const double excess = dot(a, x) - bound;
    if (excess <= 0.0) return;
    const double s = excess / sq;
    for (std::size_t k = 0; k < x.size(); ++k) x[k] -= s * a[k];
  }

  bool satisfied(const std::vector<double>& x) const { return dot(alpha, x) <= r0 && dot(beta, x) <= x0; }

  std::vector<double> project(const std::vector<double>& z) const {
    std::vector<double> x = isotonic_projection(z);
    if (satisfied(x)) return x;
    // Dykstra's alternating projections over the cone and both half-spaces.
    const std::size_t n = z.size();
    x = z;
    std::vector<double> p1(n, 0.0), p2(n, 0.0), p3(n, 0.0), tmp(n);
    for (int iter = 0; iter < 3000; ++iter) {
      for (std::size_t k = 0; k < n; ++k) tmp[k] = x[k] + p1[k];
      std::vector<double> y1 = isotonic_projection(tmp);
      for (std::size_t k = 0; k < n; ++k) p1[k] = tmp[k] - y1[k];
      for (std::size_t k = 0; k < n; ++k) tmp[k] = y1[k] + p2[k];
      std::vector<double> y2 = tmp;
      halfspace(y2, alpha, alpha_sq, r0);
      for (std::size_t k = 0; k < n; ++k) p2[k] = tmp[k] - y2[k];
      for (std::size_t k = 0; k < n; ++k) tmp[k] = y2[k] + p3[k];
      std::vector<double> y3 = tmp;
      halfspace(y3, beta, beta_sq, x0);
      for (std::size_t k = 0; k < n; ++k) p3[k] = tmp[k] - y3[k];
      double change = 0.0;
      for (std::size_t k = 0; k < n; ++k) change = std::max(change, std::abs(y3[k] - x[k]));
      x = std::move(y3);
      if (change < 1e-14) break;
    }
    return repair(isotonic_projection(x));
  }

  // Blend a monotone x toward the anchor until both constraints hold.
  std::vector<double> repair(std::vector<double> x) const {
    double theta = 0.0;
    const double ax = dot(alpha, x);
    const double bx = dot(beta, x);
    if (ax > r0) theta = std::max(theta, (ax - r0) / (ax - anchor));
    if (bx > x0) theta = std::max(theta, (bx - x0) / (bx + anchor));
    if (theta > 0.0) {
      theta = std::min(1.0, theta * (1.0 + 1e-12) + 1e-15);
      for (double& v : x) v = (1.0 - theta) * v + theta * anchor;
    }
    return x;
  }
};

struct StartResult {
  std::vector<double> x;
  double value = -std::numeric_limits<double>::infinity();
};

StartResult ascend(const InvestProblem& prob, const Feasible& set, const DiscreteDistribution& y,
                   std::vector<double> x) {
  constexpr double kStep = 1e-5;
  constexpr int kMaxIterations = 400;
  const std::size_t n = x.size();
  double value = objective_unchecked(prob.u, x, y);
  double eta = 0.5;
  std::vector<double> grad(n);
  std::vector<double> trial(n);
  for (int iter = 0; iter < kMaxIterations && eta > 1e-10; ++iter) {
    for (std::size_t k = 0; k < n; ++k) {
      grad[k] = (phi(prob.u, x[k] + kStep, y) - phi(prob.u, x[k] - kStep, y)) / (2.0 * kStep);
    }
    bool accepted = false;
    while (eta > 1e-10) {
      for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] + eta * grad[k];
      std::vector<double> candidate = set.project(trial);
      const double v = objective_unchecked(prob.u, candidate, y);
      if (v > value) {
        const double gain = v - value;
        x = std::move(candidate);
        value = v;
        eta = std::min(eta * 1.5, 8.0);
        accepted = true;
        if (gain < 1e-13 * (1.0 + std::abs(value))) eta = 0.0;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
  }
  return {std::move(x), value};
}

}  // namespace

double objective(const InvestProblem& prob, const std::vector<double>& x, const DiscreteDistribution& y) {
  check_monotone(x);
  return objective_unchecked(prob.u, x, y);
}

double order_statistic_value(const DistortionFunction& h, const std::vector<double>& x) {
  check_monotone(x);
  return dot(order_weights(h, x.size()), x);
}

ConstraintValues constraints(const InvestProblem& prob, const std::vector<double>& x) {
  check_monotone(x);
  std::vector<double> neg(x.rbegin(), x.rend());
  for (double& v : neg) v = -v;
  return {order_statistic_value(prob.rho, x), order_statistic_value(prob.price, neg)};
}

std::vector<double> isotonic_projection(const std::vector<double>& z) {
  // Blocks of (mean, size), merged while a later block undercuts an earlier one.
  std::vector<double> mean;
  std::vector<std::size_t> size;
  for (double v : z) {
    mean.push_back(v);
    size.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const std::size_t s = size[size.size() - 2] + size.back();
      const double m = (mean[mean.size() - 2] * static_cast<double>(size[size.size() - 2]) +
                        mean.back() * static_cast<double>(size.back())) /
                       static_cast<double>(s);
      mean.pop_back();
      size.pop_back();
      mean.back() = m;
      size.back() = s;
    }
  }
  std::vector<double> out;
  out.reserve(z.size());
  for (std::size_t b = 0; b < mean.size(); ++b) out.insert(out.end(), size[b], mean[b]);
  return out;
}

SolveReport solve_eps(const InvestProblem& prob, const DiscreteDistribution& y, double eps, std::uint64_t seed) {
  prob.validate();
  if (prob.r0 + prob.x0 < 0.0) throw std::invalid_argument("empty feasible set A");
  if (!(eps >= 0.0)) throw std::invalid_argument("invest: eps must be non-negative");
  const Feasible set(prob);

  constexpr std::size_t kStarts = 8;
  std::vector<StartResult> results(kStarts);
  parallel_for(kStarts, [&](std::size_t s) {
    std::vector<double> start(prob.n, set.anchor);
    if (s > 0) {
      auto rng = make_rng(seed, "invest.solve_eps", s);
      const double spread = 0.5 * (prob.r0 + prob.x0) + 0.1;
      for (double& v : start) v += spread * (2.0 * uniform01(rng) - 1.0);
      start = set.project(start);
    }
    results[s] = ascend(prob, set, y, std::move(start));
  });

  SolveReport r;
  std::size_t best = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < kStarts; ++s) {
    r.start_objectives.push_back(results[s].value);
    if (results[s].value > results[best].value) best = s;
    worst = std::min(worst, results[s].value);
  }
  r.x = results[best].x;
  r.objective = results[best].value;
  r.values = constraints(prob, r.x);
  r.gap = (r.objective - worst) + 1e-6;
  r.certified = r.gap <= eps;
  return r;
}

namespace {

DiscreteDistribution uniform_law(const std::vector<double>& x) { return DiscreteDistribution::uniform_over(x); }

}  // namespace

Prop61Report prop61_experiment(const InvestProblem& prob, const DiscreteDistribution& y, std::size_t levels,
                               std::uint64_t seed) {
  if (levels == 0) throw std::invalid_argument("prop61_experiment: need at least one level");
  prob.validate();
  Prop61Report r;
  r.lipschitz = prob.u.lipschitz();
  const QuantileFunction qy = y.quantile();

  std::vector<DiscreteDistribution> samples;
  std::vector<SolveReport> solves;
  for (std::size_t n = 1; n <= levels; ++n) {
    const std::size_t size = 100 * (std::size_t{1} << (n - 1));
    auto rng = make_rng(seed, "invest.prop61_experiment", n);
    std::vector<double> draws(size);
    for (double& d : draws) d = qy(uniform01_open_left(rng));
    samples.push_back(from_samples(draws));
    const double eps = 1.0 / static_cast<double>(n);
    solves.push_back(solve_eps(prob, samples.back(), eps, seed + n));
    r.solutions.push_back(solves.back().x);
  }

  // Final run of successive solutions whose w1 gaps stay below 1e−2.
  std::vector<double> gaps(levels, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < levels; ++i) gaps[i] = w1(uniform_law(r.solutions[i]), uniform_law(r.solutions[i - 1]));
  std::size_t first = levels - 1;
  while (first > 0 && gaps[first] < 1e-2) --first;
  r.cluster.assign(prob.n, 0.0);
  for (std::size_t i = first; i < levels; ++i) {
    r.cluster_members.push_back(i + 1);
    for (std::size_t k = 0; k < prob.n; ++k) r.cluster[k] += r.solutions[i][k];
  }
  for (double& v : r.cluster) v /= static_cast<double>(r.cluster_members.size());

  r.cluster_objective = objective(prob, r.cluster, y);
  const SolveReport reference = solve_eps(prob, y, 0.0, seed);
  r.solver_tolerance = reference.gap;
  r.best_known = reference.objective;
  for (const auto& x : r.solutions) r.best_known = std::max(r.best_known, objective(prob, x, y));

  const DiscreteDistribution cluster_law = uniform_law(r.cluster);
  for (std::size_t i = 0; i < levels; ++i) {
    Prop61Step s{};
    s.n = i + 1;
    s.sample_size = 100 * (std::size_t{1} << i);
    s.eps = 1.0 / static_cast<double>(s.n);
    s.w1_y = w1(samples[i], y);
    s.w1_to_cluster = w1(uniform_law(r.solutions[i]), cluster_law);
    s.w1_to_previous = gaps[i];
    s.objective_n = solves[i].objective;
    s.sup_estimate = solves[i].objective + solves[i].gap;
    s.feasibility_excess = std::max(solves[i].values.rho - prob.r0, solves[i].values.price - prob.x0);
    const double delta = std::max(s.w1_to_cluster, s.w1_y);
    s.chain_holds = r.cluster_objective >= s.sup_estimate - s.eps - 3.0 * r.lipschitz * delta;
    r.steps.push_back(s);
  }
  const Prop61Step& last = r.steps.back();
  const double delta_n = std::max(last.w1_to_cluster, last.w1_y);
  r.candidate_ok =
      r.cluster_objective >= r.best_known - (last.eps + 3.0 * r.lipschitz * delta_n + r.solver_tolerance);
  return r;
}

}  // namespace uirisk
