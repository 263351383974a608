#include "suppest/estimators.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "suppest/errors.hpp"

namespace suppest {

std::string_view to_token(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Rwc: return "rwc";
    case EstimatorKind::RwcS: return "rwc-s";
    case EstimatorKind::Wy: return "wy";
    case EstimatorKind::GoodTuring: return "gt";
    case EstimatorKind::Naive: return "naive";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view token) {
  for (auto kind : {EstimatorKind::Rwc, EstimatorKind::RwcS, EstimatorKind::Wy,
                    EstimatorKind::GoodTuring, EstimatorKind::Naive})
    if (token == to_token(kind)) return kind;
  throw InputError("unknown estimator '" + std::string(token) +
                   "' (expected rwc, rwc-s, wy, gt or naive)");
}

void EstimatorSpec::validate() const {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw DomainError("c0 must be positive");
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw DomainError("c1 must be positive");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (s < 2) throw DomainError("grid size s must be >= 2");
  if (max_iter < 1) throw DomainError("max_iter must be >= 1");
}

namespace {

void check_kn(double k, double n) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("k must be positive and finite");
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("n must be positive and finite");
}

}  // namespace

IntervalSpec wy_interval(double k, double n, double c1) {
  check_kn(k, n);
  const double l = n / k;
  const double r = c1 * std::log(k);
  if (!(l < r))
    throw IntervalCollapse(fmt::format("Chebyshev interval [n/k, c1 ln k] = [{:g}, {:g}] is empty",
                                       l, r));
  return IntervalSpec::range(l, r);
}

Polynomial wy_coefficients(double k, double n, double c0, double c1) {
  if (!(k >= 2.0) || !std::isfinite(k)) throw DomainError("wy: k must be >= 2");
  if (!(n >= 1.0) || !std::isfinite(n)) throw DomainError("wy: n must be >= 1");
  const int L = degree_for(k, c0);
  if (L < 1) throw DomainError(fmt::format("wy: degree floor(c0 ln k) is 0 for k = {:g}", k));
  const IntervalSpec iv = wy_interval(k, n, c1);
  return shifted_cheb_coeffs(L, iv.lo, iv.hi);
}

SipProblem estimator_problem(double k, double n, double reg_weight, const EstimatorSpec& spec) {
  spec.validate();
  check_kn(k, n);
  const int L = degree_for(k, spec.c0);
  SipProblem problem;
  problem.degree = L;
  problem.reg_weight = reg_weight;
  if (L < 1) {
    problem.grid = build_grid(IntervalSpec::point(n / k), 1);
    return problem;
  }
  const IntervalSpec iv = localized_interval(n, k, L);
  problem.grid = build_grid(iv, iv.degenerate ? 1 : spec.s);
  return problem;
}

SolveResult rwc_coefficients(double k, double n, const EstimatorSpec& spec) {
  check_kn(k, n);
  SolveOptions options;
  options.tol = spec.tol;
  options.max_iter = spec.max_iter;
  return solve(estimator_problem(k, n, 1.0 / k, spec), options);
}

SolveResult rwcs_coefficients(double k, double n, double s_count, const EstimatorSpec& spec) {
  if (!(s_count >= 1.0) || !std::isfinite(s_count))
    throw DomainError("rwc-s: counting estimate must be >= 1");
  SolveOptions options;
  options.tol = spec.tol;
  options.max_iter = spec.max_iter;
  return solve(estimator_problem(k, n, 1.0 / s_count, spec), options);
}

double apply_poly_estimator(const Fingerprint& fp, const Polynomial& p) {
  const GValues g = g_values(p);
  double total = 0.0;
  for (const auto& [j, h] : fp.entries()) total += static_cast<double>(h) * g.at(j);
  return total;
}

double naive_count(const Fingerprint& fp) { return static_cast<double>(fp.distinct()); }

namespace {

// p / q rounded once to the nearest double (ties to even), q >= 1, p / q >= 1.
double rounded_quotient(unsigned __int128 p, std::uint64_t q) {
  auto bits = [](unsigned __int128 x) {
    int b = 0;
    while (x) {
      x >>= 1;
      ++b;
    }
    return b;
  };
  unsigned __int128 quot = p / q;
  bool sticky = p % q != 0;
  int shift = 0;
  if (bits(quot) < 55) {
    // Bring in fractional bits; p << shift stays below 2^55 q.
    shift = 55 - bits(quot);
    const unsigned __int128 scaled = p << shift;
    quot = scaled / q;
    sticky = scaled % q != 0;
  }
  const int drop = bits(quot) - 53;
  std::uint64_t mant = static_cast<std::uint64_t>(quot >> drop);
  const unsigned __int128 rest = quot & ((static_cast<unsigned __int128>(1) << drop) - 1);
  const unsigned __int128 half = static_cast<unsigned __int128>(1) << (drop - 1);
  if (rest > half || (rest == half && (sticky || (mant & 1)))) ++mant;
  return std::ldexp(static_cast<double>(mant), drop - shift);
}

}  // namespace

double good_turing(const Fingerprint& fp, std::uint64_t n) {
  if (n == 0 || n != fp.n())
    throw DomainError(fmt::format("good_turing: n = {} must equal the fingerprint sample size {} "
                                  "and be >= 1",
                                  n, fp.n()));
  const std::uint64_t h1 = fp.h(1);
  if (h1 == n) throw CoverageZero("good_turing: every symbol is a singleton, coverage is zero");
  return rounded_quotient(static_cast<unsigned __int128>(fp.distinct()) * n, n - h1);
}

EstimateResult estimate(const EstimatorSpec& spec, const Fingerprint& fp, double k) {
  spec.validate();
  EstimateResult out;
  out.kind = spec.kind;
  if (spec.kind == EstimatorKind::Naive) {
    out.value = naive_count(fp);
    return out;
  }
  if (fp.empty()) throw DomainError("estimate: empty sample");
  const auto n = static_cast<double>(fp.n());
  check_kn(k, n);

  auto fall_back = [&](const std::string& why) {
    out.value = naive_count(fp);
    out.diagnostics.fell_back = true;
    out.diagnostics.note = why + "; fell back to counting";
    return out;
  };

  switch (spec.kind) {
    case EstimatorKind::GoodTuring:
      try {
        out.value = good_turing(fp, fp.n());
      } catch (const CoverageZero& e) {
        if (!spec.fallback) throw;
        return fall_back(e.what());
      }
      return out;

    case EstimatorKind::Wy: {
      Polynomial p;
      try {
        p = wy_coefficients(k, n, spec.c0, spec.c1);
      } catch (const IntervalCollapse& e) {
        if (!spec.fallback) throw;
        return fall_back(e.what());
      } catch (const DomainError& e) {
        if (!spec.fallback || degree_for(k, spec.c0) >= 1) throw;
        return fall_back(e.what());
      }
      out.diagnostics.degree = p.degree();
      out.diagnostics.interval = wy_interval(k, n, spec.c1);
      out.value = apply_poly_estimator(fp, p);
      out.coeffs = std::move(p);
      return out;
    }

    case EstimatorKind::Rwc:
    case EstimatorKind::RwcS: {
      const double reg = spec.kind == EstimatorKind::Rwc ? 1.0 / k : 1.0 / naive_count(fp);
      const SipProblem problem = estimator_problem(k, n, reg, spec);
      SolveOptions options;
      options.tol = spec.tol;
      options.max_iter = spec.max_iter;
      SolveResult r = solve(problem, options);
      out.diagnostics.degree = problem.degree;
      out.diagnostics.interval = problem.grid.interval();
      out.diagnostics.reg_weight = reg;
      out.diagnostics.t_d = r.t_d;
      out.diagnostics.duality_gap = r.duality_gap;
      out.diagnostics.iterations = r.iterations;
      out.value = apply_poly_estimator(fp, r.coeffs);
      out.coeffs = std::move(r.coeffs);
      return out;
    }

    case EstimatorKind::Naive: break;
  }
  return out;
}

}  // namespace suppest
