#pragma once

// Discretized minimax design of estimator polynomials.
//
//   minimize  t   over a_1..a_L, t
//   subject   g(a, lambda_i) <= t   for every grid point lambda_i,   a_0 = -1
//
// g is the objective from poly.hpp. Every constraint is a strictly convex
// quadratic in the free coefficients when reg_weight > 0, so the program has
// a unique minimizer. The solver returns it together with simplex weights on
// the grid whose Lagrangian bound certifies the duality gap.

#include <optional>
#include <vector>

#include "suppest/poly.hpp"

namespace suppest {

// Past this multiple of the degree the objective is decreasing in lambda.
inline constexpr double kLocalizationFactor = 6.5;

struct IntervalSpec {
  double lo = 1.0;
  double hi = 1.0;
  bool degenerate = true;

  // Throws InvalidInterval unless 0 < lo <= hi. lo == hi yields a point.
  static IntervalSpec range(double lo, double hi);
  static IntervalSpec point(double x);

  double length() const noexcept { return hi - lo; }
  bool operator==(const IntervalSpec&) const = default;
};

class GridSpec {
 public:
  GridSpec() = default;

  const IntervalSpec& interval() const noexcept { return interval_; }
  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  // Spacing (hi - lo) / (s - 1); zero for a single point.
  double spacing() const noexcept { return spacing_; }

 private:
  friend GridSpec build_grid(const IntervalSpec&, std::size_t);
  IntervalSpec interval_;
  std::vector<double> points_;
  double spacing_ = 0.0;
};

struct SipProblem {
  int degree = 0;
  GridSpec grid;
  double reg_weight = 0.0;
  // Optional ridge added to every constraint as ridge * sum_{l>=1} (a_l l!)^2.
  // Only meant for reg_weight == 0 problems that are otherwise singular.
  double ridge = 0.0;

  // Throws DomainError / RankDeficient on an ill-posed instance.
  void validate() const;
};

struct SolveOptions {
  double tol = 1e-8;
  long max_iter = 200000;
  // Starting coefficients (a_0 must be -1, degree must match). Defaults to
  // the counting estimator a = (-1, 0, ..., 0).
  std::optional<Polynomial> start;
};

struct SolveResult {
  Polynomial coeffs;
  // Max over the grid of g(coeffs, .), the value attained by coeffs.
  double t_d = 0.0;
  // t_d minus the Lagrangian lower bound at dual_weights; >= 0.
  double duality_gap = 0.0;
  double dual_value = 0.0;
  long iterations = 0;
  std::vector<double> dual_weights;
};

// [n/k, 6.5 L] when n/k < 6.5 L, otherwise the single point {n/k}.
IntervalSpec localized_interval(double n, double k, int degree);

// [n/k, n/k + pi L / 2], for unregularized problems.
IntervalSpec mrs_interval(double n, double k, int degree);

// s uniformly spaced points including both endpoints. A degenerate interval
// requires s == 1; a proper one requires s >= 2 (InvalidGrid otherwise).
GridSpec build_grid(const IntervalSpec& interval, std::size_t s);

// Throws NonConvergence when max_iter Newton steps do not bring the gap under
// tol, RankDeficient when the aggregate quadratic form is singular.
SolveResult solve(const SipProblem& problem, const SolveOptions& options = {});
SolveResult solve(const SipProblem& problem, double tol, long max_iter);

// Max of g(result.coeffs, .) over a grid oversample times finer than the
// problem's grid on the same interval.
double certify(const SolveResult& result, const SipProblem& problem, std::size_t oversample);

}  // namespace suppest
