#pragma once

// Support-size estimators: the regularized weighted Chebyshev estimator with
// variance weight 1/k (RWC) or 1/S_c (RWC-S), the unweighted shifted
// Chebyshev baseline (WY), Good-Turing, and plain counting.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "suppest/histogram.hpp"
#include "suppest/poly.hpp"
#include "suppest/sip.hpp"

namespace suppest {

enum class EstimatorKind { Rwc, RwcS, Wy, GoodTuring, Naive };

// Stable tokens: rwc, rwc-s, wy, gt, naive.
std::string_view to_token(EstimatorKind kind);
// Throws InputError on an unknown token.
EstimatorKind parse_estimator_kind(std::string_view token);

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Rwc;
  double c0 = 0.558;
  double c1 = 0.5;
  std::size_t s = 1000;
  double tol = 1e-8;
  long max_iter = 200000;
  // WY: fall back to counting when the Chebyshev interval collapses or the
  // degree is 0. GT: fall back to counting when coverage is zero.
  bool fallback = false;

  // Throws DomainError unless c0, c1, tol > 0, s >= 2, max_iter >= 1.
  void validate() const;
};

struct EstimateDiagnostics {
  int degree = 0;
  std::optional<IntervalSpec> interval;
  double reg_weight = 0.0;
  double t_d = 0.0;
  double duality_gap = 0.0;
  long iterations = 0;
  bool fell_back = false;
  std::string note;
};

struct EstimateResult {
  EstimatorKind kind = EstimatorKind::Naive;
  double value = 0.0;
  std::optional<Polynomial> coeffs;
  EstimateDiagnostics diagnostics;
};

// floor(c0 ln k) and the shifted Chebyshev polynomial on [n/k, c1 ln k].
// Throws DomainError unless k >= 2, n >= 1 and the degree is >= 1;
// IntervalCollapse when n/k >= c1 ln k.
Polynomial wy_coefficients(double k, double n, double c0, double c1);
IntervalSpec wy_interval(double k, double n, double c1);

// Minimax design over the localized interval with reg_weight 1/k. A degree
// of 0 yields the counting polynomial (-1).
SolveResult rwc_coefficients(double k, double n, const EstimatorSpec& spec);
// Same with reg_weight 1/s_count. Throws DomainError unless s_count >= 1.
SolveResult rwcs_coefficients(double k, double n, double s_count, const EstimatorSpec& spec);

// The SipProblem behind rwc/rwcs_coefficients.
SipProblem estimator_problem(double k, double n, double reg_weight, const EstimatorSpec& spec);

// sum_j h_j g(j); unseen symbols contribute g(0) = 0.
double apply_poly_estimator(const Fingerprint& fp, const Polynomial& p);
// S_c / (1 - h1 / n). Throws DomainError unless n == fp.n() >= 1,
// CoverageZero when every symbol is a singleton.
double good_turing(const Fingerprint& fp, std::uint64_t n);
double naive_count(const Fingerprint& fp);

// Builds and applies the estimator for a sample of size fp.n(). Throws
// DomainError on an empty fingerprint for anything but counting.
EstimateResult estimate(const EstimatorSpec& spec, const Fingerprint& fp, double k);

}  // namespace suppest
