#include "suppest/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "suppest/errors.hpp"

namespace suppest {

namespace {

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void check_params(const ObjectiveParams& params) {
  if (!(params.lambda > 0.0) || !std::isfinite(params.lambda))
    throw DomainError("objective: lambda must be positive and finite, got " +
                      std::to_string(params.lambda));
  if (!(params.reg_weight >= 0.0) || !std::isfinite(params.reg_weight))
    throw DomainError("objective: reg_weight must be nonnegative and finite");
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("polynomial needs at least one coefficient");
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw DomainError("polynomial coefficients must be finite");
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> log_factorials(int max_j) {
  std::vector<double> out(static_cast<std::size_t>(std::max(max_j, 0)) + 1, 0.0);
  for (std::size_t j = 2; j < out.size(); ++j)
    out[j] = out[j - 1] + std::log(static_cast<double>(j));
  return out;
}

double cheb_T(int degree, double x) {
  if (degree < 0) throw DomainError("cheb_T: degree must be nonnegative");
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < degree; ++j) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Polynomial shifted_cheb_coeffs(int degree, double l, double r) {
  if (degree < 1) throw DomainError("shifted_cheb_coeffs: degree must be >= 1");
  if (!(l > 0.0) || !(l < r) || !std::isfinite(r))
    throw InvalidInterval("shifted_cheb_coeffs: need 0 < l < r, got [" +
                          std::to_string(l) + ", " + std::to_string(r) + "]");

  // T_j(alpha x + beta) in the monomial basis, carried through the recurrence.
  const double alpha = 2.0 / (r - l);
  const double beta = -(r + l) / (r - l);
  const auto n = static_cast<std::size_t>(degree) + 1;
  std::vector<double> prev(n, 0.0), cur(n, 0.0), next(n, 0.0);
  prev[0] = 1.0;
  cur[0] = beta;
  cur[1] = alpha;
  for (int j = 1; j < degree; ++j) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t m = 0; m <= static_cast<std::size_t>(j); ++m) {
      next[m] += 2.0 * beta * cur[m];
      next[m + 1] += 2.0 * alpha * cur[m];
    }
    for (std::size_t m = 0; m < n; ++m) next[m] -= prev[m];
    std::swap(prev, cur);
    std::swap(cur, next);
  }

  // cur[0] = T_L(beta); |beta| > 1 so it is bounded away from zero.
  const double scale = -1.0 / cur[0];
  std::vector<double> out(n);
  for (std::size_t m = 0; m < n; ++m) out[m] = cur[m] * scale;
  out[0] = -1.0;
  return Polynomial(std::move(out));
}

double poly_eval(const Polynomial& p, double x) noexcept { return p(x); }

ObjectiveTerms objective_g(const Polynomial& p, const ObjectiveParams& params) {
  check_params(params);
  const auto a = p.coeffs();
  const auto lf = log_factorials(p.degree());
  const double log_lambda = std::log(params.lambda);

  double variance = 0.0;
  if (params.reg_weight > 0.0) {
    for (std::size_t l = 0; l < a.size(); ++l) {
      if (a[l] == 0.0) continue;
      const double w = std::exp(static_cast<double>(l) * log_lambda + lf[l] - params.lambda);
      variance += w * a[l] * a[l];
    }
    variance *= params.reg_weight;
  }
  const double bias = std::exp(-params.lambda) * p(params.lambda);
  return {variance, bias, variance + bias * bias};
}

double log_objective_g(const Polynomial& p, const ObjectiveParams& params) {
  check_params(params);
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  const auto a = p.coeffs();
  const auto lf = log_factorials(p.degree());
  const double log_lambda = std::log(params.lambda);

  double log_var = neg_inf;
  if (params.reg_weight > 0.0) {
    for (std::size_t l = 0; l < a.size(); ++l) {
      if (a[l] == 0.0) continue;
      log_var = log_sum_exp(log_var, 2.0 * std::log(std::abs(a[l])) +
                                         static_cast<double>(l) * log_lambda + lf[l] -
                                         params.lambda);
    }
    log_var += std::log(params.reg_weight);
  }
  const double value = p(params.lambda);
  const double log_bias2 = value == 0.0 ? neg_inf : 2.0 * (std::log(std::abs(value)) - params.lambda);
  return log_sum_exp(log_var, log_bias2);
}

GValues g_values(const Polynomial& p) {
  if (!p.is_estimator())
    throw InvalidEstimator("estimator polynomial must have a_0 = -1");
  GValues out;
  out.values.resize(p.coeffs().size());
  out.values[0] = 0.0;
  double fact = 1.0;
  for (std::size_t j = 1; j < out.values.size(); ++j) {
    fact *= static_cast<double>(j);
    out.values[j] = p[j] * fact + 1.0;
  }
  return out;
}

Polynomial from_g_values(std::span<const double> g) {
  if (g.empty()) throw DomainError("from_g_values: empty input");
  std::vector<double> a(g.size());
  a[0] = -1.0;
  double fact = 1.0;
  for (std::size_t j = 1; j < g.size(); ++j) {
    fact *= static_cast<double>(j);
    a[j] = (g[j] - 1.0) / fact;
  }
  return Polynomial(std::move(a));
}

int degree_for(double k, double c0) {
  if (!(k > 0.0) || !(c0 > 0.0)) throw DomainError("degree_for: k and c0 must be positive");
  const double v = std::floor(c0 * std::log(k));
  return v < 0.0 ? 0 : static_cast<int>(v);
}

}  // namespace suppest
