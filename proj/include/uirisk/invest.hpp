#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "uirisk/distortion.hpp"
#include "uirisk/distribution.hpp"

namespace uirisk {

/// u(x, y) = v(a x + b y) with v one of tanh, the identity, or a concave
/// piecewise-linear function through (knots_x[i], knots_y[i]) extended
/// linearly beyond the end knots.
class Utility {
 public:
  static Utility tanh(double a, double b);
  static Utility linear(double a, double b);
  static Utility piecewise_linear(double a, double b, std::vector<double> knots_x, std::vector<double> knots_y);

  double operator()(double x, double y) const { return v(a_ * x + b_ * y); }
  double v(double s) const;
  /// Lipschitz constant of u for the l1 norm on (x, y): Lip(v) max(|a|, |b|).
  double lipschitz() const noexcept { return lip_v_ * std::max(std::abs(a_), std::abs(b_)); }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::string name() const;
  const std::vector<double>& knots_x() const noexcept { return kx_; }
  const std::vector<double>& knots_y() const noexcept { return ky_; }

 private:
  enum class Kind { tanh, linear, piecewise };
  Utility(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
  double lip_v_ = 1.0;
  std::vector<double> kx_;
  std::vector<double> ky_;
};

/// maximize E[u(−X, Y)] subject to ρ(X) <= r0 and P(−X) <= x0, over laws of X
/// given by n quantiles of weight 1/n each. ρ and P must both lie in D_c.
struct InvestProblem {
  std::size_t n = 50;
  Utility u = Utility::tanh(1.0, 0.5);
  DistortionFunction rho = DistortionFunction::ies();
  DistortionFunction price = DistortionFunction::power(0.5);
  double r0 = 1.0;
  double x0 = 0.5;

  /// Throws unless n >= 1, both distortions lie in D_c and r0, x0 are finite.
  void validate() const;
};

/// The default background risk: uniform on `points` equally spaced values in [−1, 1].
DiscreteDistribution default_background(std::size_t points = 201);

/// Sorted quantile vector of X; throws std::invalid_argument on a decreasing entry.
void check_monotone(const std::vector<double>& x);

/// Σ_i Σ_j (1/n) w_j u(−x_i, y_j).
double objective(const InvestProblem& prob, const std::vector<double>& x, const DiscreteDistribution& y);

/// ρ_h of the uniform law on x by order statistics: Σ_i (h(i/n) − h((i−1)/n)) x_(i),
/// with x_(1) the largest entry.
double order_statistic_value(const DistortionFunction& h, const std::vector<double>& x);

struct ConstraintValues {
  double rho;    ///< ρ(X)
  double price;  ///< P(−X)
};

ConstraintValues constraints(const InvestProblem& prob, const std::vector<double>& x);

/// Least-squares projection onto non-decreasing vectors (pool adjacent violators).
std::vector<double> isotonic_projection(const std::vector<double>& z);

struct SolveReport {
  std::vector<double> x;
  double objective = 0.0;
  ConstraintValues values{0.0, 0.0};
  /// Spread of the multi-start objectives plus 1e−6.
  double gap = 0.0;
  bool certified = false;  ///< gap <= ε
  std::vector<double> start_objectives;
};

/// Multi-start (8 starts) projected gradient ascent with central finite
/// differences (step 1e−5). Each iterate is projected onto the monotone cone
/// and the two constraint half-spaces by Dykstra's method, then blended toward
/// the feasible constant (r0 − x0)/2 so both constraints hold exactly.
/// Throws std::invalid_argument("empty feasible set A") when r0 + x0 < 0.
SolveReport solve_eps(const InvestProblem& prob, const DiscreteDistribution& y, double eps, std::uint64_t seed);

struct Prop61Step {
  std::size_t n;
  std::size_t sample_size;
  double eps;
  double w1_y;           ///< w1(Y_n, Y)
  double w1_to_cluster;  ///< w1(X_n, X*)
  double w1_to_previous; ///< w1(X_n, X_{n−1}), NaN for n = 1
  double objective_n;    ///< E[u(−X_n, Y_n)]
  double sup_estimate;   ///< objective_n + gap_n
  double feasibility_excess;
  bool chain_holds;      ///< E[u(−X*, Y)] >= sup_estimate − ε_n − 3c δ_n
};

struct Prop61Report {
  std::vector<Prop61Step> steps;
  std::vector<std::vector<double>> solutions;
  std::vector<double> cluster;  ///< the candidate X*
  std::vector<std::size_t> cluster_members;
  double cluster_objective = 0.0;  ///< E[u(−X*, Y)]
  double best_known = 0.0;
  double lipschitz = 0.0;
  double solver_tolerance = 0.0;
  bool candidate_ok = false;
};

/// Solves the problem against Y_n, the empirical law of 100·2^{n−1} draws from
/// Y, with ε_n = 1/n for n = 1..levels. X* averages the solutions in the final
/// cluster of successive w1 gaps below 1e−2 (the last solution alone if none).
Prop61Report prop61_experiment(const InvestProblem& prob, const DiscreteDistribution& y, std::size_t levels,
                               std::uint64_t seed);

}  // namespace uirisk
