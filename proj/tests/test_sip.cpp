#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracle.hpp"
#include "suppest/errors.hpp"
#include "suppest/estimators.hpp"
#include "suppest/sip.hpp"

using namespace suppest;

namespace {

double oracle_max(const Polynomial& p, double w, const std::vector<double>& grid) {
  const std::vector<double> a(p.coeffs().begin(), p.coeffs().end());
  double m = -INFINITY;
  for (double x : grid) m = std::max(m, static_cast<double>(oracle::objective(a, w, x).g));
  return m;
}

SipProblem rwc_problem(double k, double n, std::size_t s = 1000) {
  EstimatorSpec spec;
  spec.s = s;
  return estimator_problem(k, n, 1.0 / k, spec);
}

void check_certificate(const SipProblem& problem, const SolveResult& r, double tol) {
  CHECK(r.duality_gap >= 0.0);
  CHECK(r.duality_gap <= tol);
  REQUIRE(r.dual_weights.size() == problem.grid.size());
  CHECK(*std::min_element(r.dual_weights.begin(), r.dual_weights.end()) >= 0.0);
  const double total = std::accumulate(r.dual_weights.begin(), r.dual_weights.end(), 0.0);
  CHECK(std::abs(total - 1.0) <= 1e-12);
  const double attained = oracle_max(r.coeffs, problem.reg_weight, problem.grid.points());
  CHECK(attained <= r.t_d + r.duality_gap + 1e-15);
  CHECK(attained >= r.t_d * (1 - 1e-12));
  const long double bound = oracle::lagrangian_bound(problem.degree, problem.grid.points(),
                                                     r.dual_weights, problem.reg_weight);
  CHECK(static_cast<double>(attained - bound) <= tol);
}

}  // namespace

TEST_CASE("localized and MRS intervals") {
  const IntervalSpec a = localized_interval(1e6, 1e6, 7);
  CHECK(a.lo == 1.0);
  CHECK(a.hi == 45.5);
  CHECK_FALSE(a.degenerate);
  const IntervalSpec b = localized_interval(1e6 * 50, 1e6, 7);
  CHECK(b.degenerate);
  CHECK(b.lo == 50.0);
  CHECK(b.hi == 50.0);
  const IntervalSpec c = mrs_interval(5e5, 1e6, 4);
  CHECK(c.lo == 0.5);
  CHECK(c.hi == doctest::Approx(0.5 + 2 * M_PI));
  CHECK_THROWS_AS(localized_interval(0.0, 1e6, 7), DomainError);
  CHECK_THROWS_AS(IntervalSpec::range(0.0, 1.0), InvalidInterval);
  CHECK_THROWS_AS(IntervalSpec::range(2.0, 1.0), InvalidInterval);
  CHECK(IntervalSpec::range(2.0, 2.0).degenerate);
}

TEST_CASE("build_grid keeps both endpoints and uniform spacing") {
  for (std::size_t s : {2u, 3u, 11u, 1000u, 5121u}) {
    const GridSpec g = build_grid(IntervalSpec::range(0.37, 45.5), s);
    const auto& p = g.points();
    REQUIRE(p.size() == s);
    CHECK(p.front() == 0.37);
    CHECK(p.back() == 45.5);
    const double d = (45.5 - 0.37) / (s - 1);
    CHECK(g.spacing() == doctest::Approx(d).epsilon(1e-15));
    for (std::size_t i = 1; i < s; ++i) {
      CHECK(p[i] > p[i - 1]);
      CHECK(std::abs(p[i] - (0.37 + i * d)) <= 1e-12 * p[i]);
    }
  }
  CHECK(build_grid(IntervalSpec::point(3.0), 1).size() == 1);
  CHECK_THROWS_AS(build_grid(IntervalSpec::point(3.0), 2), InvalidGrid);
  CHECK_THROWS_AS(build_grid(IntervalSpec::range(1.0, 2.0), 1), InvalidGrid);
}

TEST_CASE("SipProblem validation") {
  SipProblem p;
  p.degree = 5;
  p.reg_weight = 0.0;
  p.grid = build_grid(IntervalSpec::range(1.0, 10.0), 6);
  CHECK_THROWS_AS(p.validate(), RankDeficient);
  p.grid = build_grid(IntervalSpec::range(1.0, 10.0), 7);
  CHECK_NOTHROW(p.validate());
  p.reg_weight = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.reg_weight = 0.1;
  p.degree = -1;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("solve returns a certified optimum on the standard instance") {
  const SipProblem problem = rwc_problem(1e6, 1e6);
  REQUIRE(problem.degree == 7);
  const SolveResult r = solve(problem);
  check_certificate(problem, r, 1e-8);
  CHECK(r.coeffs[0] == -1.0);
  CHECK(r.t_d == doctest::Approx(1.41255086e-5).epsilon(1e-6));
}

TEST_CASE("solve certifies across scales") {
  for (double k : {1e2, 1e3, 1e5, 1e8}) {
    for (double f : {0.25, 1.0, 3.0}) {
      const SipProblem problem = rwc_problem(k, f * k, 500);
      CAPTURE(k);
      CAPTURE(f);
      check_certificate(problem, solve(problem, 1e-9, 200000), 1e-9);
    }
  }
}

TEST_CASE("solutions do not depend on the starting point") {
  const SipProblem problem = rwc_problem(1e4, 1e4);
  SolveOptions a;
  a.tol = 1e-9;
  SolveOptions b = a;
  b.start = wy_coefficients(1e4, 1e4, 0.558, 0.5);
  const SolveResult ra = solve(problem, a);
  const SolveResult rb = solve(problem, b);
  for (int i = 0; i <= problem.degree; ++i) CHECK(std::abs(ra.coeffs[i] - rb.coeffs[i]) < 1e-5);
}

TEST_CASE("nested grids give nondecreasing t_d") {
  double prev = 0.0;
  for (std::size_t s : {3u, 5u, 9u, 17u, 33u, 65u, 129u, 1025u}) {
    const SipProblem problem = rwc_problem(1e5, 1e5, s);
    const SolveResult r = solve(problem, 1e-10, 200000);
    CHECK(r.t_d >= prev - 2e-10);
    prev = r.t_d;
  }
}

TEST_CASE("large grids go through the exchange path and stay certified") {
  const SipProblem problem = rwc_problem(1e6, 1e6, 5121);
  check_certificate(problem, solve(problem), 1e-8);
}

TEST_CASE("degenerate and trivial instances") {
  SipProblem point;
  point.degree = 3;
  point.reg_weight = 1e-4;
  point.grid = build_grid(IntervalSpec::point(2.0), 1);
  const SolveResult r = solve(point);
  CHECK(r.duality_gap <= 1e-8);
  CHECK(r.dual_weights == std::vector<double>{1.0});

  SipProblem zero;
  zero.degree = 0;
  zero.reg_weight = 0.01;
  zero.grid = build_grid(IntervalSpec::range(1.0, 5.0), 10);
  const SolveResult z = solve(zero);
  CHECK(z.coeffs == Polynomial());
  const double e = std::exp(-1.0);
  CHECK(z.t_d == doctest::Approx(0.01 * e + e * e).epsilon(1e-14));
}

TEST_CASE("unregularized problems need enough points or a ridge") {
  SipProblem p;
  p.degree = 4;
  p.reg_weight = 0.0;
  p.grid = build_grid(IntervalSpec::range(1.0, 1.0 + M_PI * 2), 200);
  const SolveResult r = solve(p, 1e-10, 200000);
  check_certificate(p, r, 1e-10);

  SipProblem single = p;
  single.grid = build_grid(IntervalSpec::point(1.0), 1);
  CHECK_THROWS_AS(solve(single), RankDeficient);
  single.ridge = 1e-12;
  CHECK_NOTHROW(solve(single));
}

TEST_CASE("budget exhaustion reports the best iterate") {
  const SipProblem problem = rwc_problem(1e6, 1e6);
  try {
    (void)solve(problem, 1e-12, 2);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.best_coeffs().size() == 8);
    CHECK(e.best_gap() > 1e-12);
  }
}

TEST_CASE("solve option validation") {
  const SipProblem problem = rwc_problem(1e4, 1e4, 50);
  SolveOptions o;
  o.start = Polynomial({-1.0, 0.5});
  CHECK_THROWS_AS(solve(problem, o), DomainError);
  o.start = Polynomial({-0.5, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(solve(problem, o), InvalidEstimator);
  CHECK_THROWS_AS(solve(problem, 0.0, 10), DomainError);
  CHECK_THROWS_AS(solve(problem, 1e-8, 0), DomainError);
}

TEST_CASE("certify on a finer grid stays close to t_d") {
  const SipProblem problem = rwc_problem(1e6, 1e6);
  const SolveResult r = solve(problem);
  const double fine = certify(r, problem, 16);
  CHECK(fine >= r.t_d * (1 - 1e-12));
  CHECK(fine <= r.t_d * 1.01);
  CHECK_THROWS_AS(certify(r, problem, 1), DomainError);
}
