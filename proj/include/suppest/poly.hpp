#pragma once

// Chebyshev machinery and the per-lambda risk objective shared by every
// polynomial-class support estimator.
//
// An estimator polynomial a = (a_0, ..., a_L) with a_0 = -1 defines the
// per-count map g(j) = a_j j! + 1 for j <= L and g(j) = 1 beyond. Under
// Poissonized sampling a symbol with mean count lambda contributes
//
//   variance(lambda) = w * sum_l e^{-lambda} a_l^2 lambda^l l!
//   bias(lambda)     = e^{-lambda} sum_l a_l lambda^l
//
// to the normalized risk, where w is the regularization weight (1/k for RWC).

#include <cstdint>
#include <span>
#include <vector>

namespace suppest {

class Polynomial {
 public:
  Polynomial() : coeffs_{-1.0} {}
  // Throws DomainError on empty or non-finite input.
  explicit Polynomial(std::vector<double> coeffs);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  // True when a_0 == -1 exactly.
  bool is_estimator() const noexcept { return coeffs_.front() == -1.0; }

  // Horner evaluation of sum_l a_l x^l.
  double operator()(double x) const noexcept;

  bool operator==(const Polynomial&) const = default;

 private:
  std::vector<double> coeffs_;
};

struct ObjectiveParams {
  double reg_weight = 0.0;
  double lambda = 1.0;
};

struct ObjectiveTerms {
  double variance = 0.0;
  double bias = 0.0;
  double g = 0.0;
};

// Per-count estimator values g(0..L) plus the value used for every count > L.
struct GValues {
  std::vector<double> values;
  double tail = 1.0;

  double at(std::uint64_t j) const noexcept {
    return j < values.size() ? values[j] : tail;
  }
};

// ln j! for j = 0..max_j, built by summation.
std::vector<double> log_factorials(int max_j);

// T_L(x) by the three-term recurrence.
double cheb_T(int degree, double x);

// Monomial coefficients of R_L(x) = -T_L((2x-r-l)/(r-l)) / T_L((-r-l)/(r-l)).
// Coefficient 0 is -1. Throws InvalidInterval unless 0 < l < r, DomainError
// unless degree >= 1.
Polynomial shifted_cheb_coeffs(int degree, double l, double r);

double poly_eval(const Polynomial& p, double x) noexcept;

// Throws DomainError when lambda <= 0 or reg_weight < 0.
ObjectiveTerms objective_g(const Polynomial& p, const ObjectiveParams& params);

// ln g computed entirely in the log domain, usable far past the point where
// e^{-lambda} underflows. Returns -inf when g is exactly zero.
double log_objective_g(const Polynomial& p, const ObjectiveParams& params);

// Throws InvalidEstimator unless a_0 == -1.
GValues g_values(const Polynomial& p);

// Inverse of g_values: a_j = (g(j) - 1) / j!.
Polynomial from_g_values(std::span<const double> g);

// floor(c0 ln k), clamped at 0.
int degree_for(double k, double c0);

}  // namespace suppest
