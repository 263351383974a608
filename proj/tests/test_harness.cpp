#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracle.hpp"
#include "suppest/errors.hpp"
#include "suppest/harness.hpp"
#include "suppest/serialize.hpp"

using namespace suppest;

namespace {

std::vector<EstimatorSpec> all_specs() {
  std::vector<EstimatorSpec> out;
  for (auto kind : {EstimatorKind::Rwc, EstimatorKind::RwcS, EstimatorKind::Wy,
                    EstimatorKind::GoodTuring, EstimatorKind::Naive}) {
    EstimatorSpec s;
    s.kind = kind;
    s.fallback = true;
    out.push_back(s);
  }
  return out;
}

std::vector<DistributionSpec> small_suite() { return standard_suite(2e-3); }

}  // namespace

TEST_CASE("SampleSize resolution") {
  CHECK(SampleSize::fraction(1.0).resolve(1000) == 1000);
  CHECK(SampleSize::fraction(0.25).resolve(1001) == 250);
  CHECK(SampleSize::absolute(77).resolve(1000) == 77);
  CHECK_THROWS_AS(SampleSize::fraction(1e-6).resolve(1000), DomainError);
}

TEST_CASE("normalization tokens") {
  CHECK(parse_normalization("k2") == Normalization::K2);
  CHECK(parse_normalization("s2") == Normalization::S2);
  CHECK(to_token(Normalization::S2) == "s2");
  CHECK_THROWS_AS(parse_normalization("l1"), InputError);
}

TEST_CASE("risk report is identical for any thread count") {
  const auto dists = small_suite();
  const std::vector<SampleSize> sizes{SampleSize::fraction(0.5), SampleSize::fraction(1.0)};
  RiskOptions one, four;
  four.threads = 4;
  const auto a = evaluate_risk(all_specs(), dists, sizes, 12, 5, Normalization::K2, one);
  const auto b = evaluate_risk(all_specs(), dists, sizes, 12, 5, Normalization::K2, four);
  CHECK(risk_csv(a) == risk_csv(b));
  CHECK(a.rows.size() == 5 * dists.size() * sizes.size());
  CHECK(to_json(a).dump() == to_json(b).dump());
  const auto c = evaluate_risk(all_specs(), dists, sizes, 12, 6, Normalization::K2, one);
  CHECK(risk_csv(a) != risk_csv(c));
}

TEST_CASE("risk rows agree with per-trial estimation from the same seeds") {
  const auto dists = small_suite();
  const std::vector<SampleSize> sizes{SampleSize::fraction(1.0)};
  const std::uint64_t trials = 8, seed = 2024;
  for (auto norm : {Normalization::K2, Normalization::S2}) {
    const auto rep = evaluate_risk(all_specs(), dists, sizes, trials, seed, norm);
    for (const auto& row : rep.rows) {
      REQUIRE(row.ok());
      std::size_t d = 0;
      while (dists[d].name() != row.distribution) ++d;
      const EstimatorSpec spec = all_specs()[static_cast<std::size_t>(parse_estimator_kind(row.estimator))];
      const Sampler sampler(dists[d]);
      std::vector<double> est;
      for (std::uint64_t t = 0; t < trials; ++t) {
        const Fingerprint fp =
            fingerprint_from_counts(sampler.counts(row.n, derive_seed(seed, {d, 0, t})));
        est.push_back(estimate(spec, fp, static_cast<double>(dists[d].k())).value);
      }
      double mean = 0.0, mse = 0.0, var = 0.0;
      const double S = static_cast<double>(dists[d].support);
      for (double v : est) mean += v / trials;
      for (double v : est) {
        mse += (v - S) * (v - S) / trials;
        var += (v - mean) * (v - mean) / trials;
      }
      CAPTURE(row.estimator);
      CAPTURE(row.distribution);
      CHECK(row.mean == doctest::Approx(mean).epsilon(1e-12));
      CHECK(row.mse == doctest::Approx(mse).epsilon(1e-10));
      CHECK(row.std == doctest::Approx(std::sqrt(var)).epsilon(1e-9).scale(S));
      CHECK(row.mse >= 0.0);
      const double denom = norm == Normalization::K2 ? static_cast<double>(row.k) * row.k : S * S;
      CHECK(row.normalized_mse == doctest::Approx(row.mse / denom).epsilon(1e-15));
      CHECK(row.support == dists[d].support);
      CHECK(row.k == dists[d].k());
      CHECK_FALSE(row.runtime_s.has_value());
    }
  }
}

TEST_CASE("worst case picks the max over distributions") {
  const auto rep = evaluate_risk(all_specs(), small_suite(), {SampleSize::fraction(1.0)}, 5, 9,
                                 Normalization::S2);
  const auto worst = worst_case(rep);
  REQUIRE(worst.size() == 5);
  for (const auto& w : worst) {
    double m = 0.0;
    std::string which;
    for (const auto& r : rep.rows)
      if (r.estimator == w.estimator && r.normalized_mse > m) {
        m = r.normalized_mse;
        which = r.distribution;
      }
    CHECK(w.worst_normalized_mse == m);
    CHECK(w.worst_distribution == which);
    CHECK(w.status == "ok");
  }
}

TEST_CASE("failing cells are marked, not fatal") {
  EstimatorSpec gt;
  gt.kind = EstimatorKind::GoodTuring;
  // Two draws from 10^4 symbols are almost surely two singletons.
  const auto rep = evaluate_risk({gt}, {make_distribution(DistKind::Uniform, 1e-4)},
                                 {SampleSize::absolute(2)}, 3, 1, Normalization::K2);
  REQUIRE(rep.rows.size() == 1);
  CHECK_FALSE(rep.rows[0].ok());
  CHECK(rep.rows[0].status.rfind("error: ", 0) == 0);
  CHECK(worst_case(rep)[0].status != "ok");
}

TEST_CASE("runtime is recorded only on request") {
  RiskOptions o;
  o.record_runtime = true;
  const auto rep = evaluate_risk({all_specs()[0]}, {make_distribution(DistKind::Uniform, 1e-3)},
                                 {SampleSize::fraction(1.0)}, 2, 1, Normalization::K2, o);
  REQUIRE(rep.rows[0].runtime_s.has_value());
  CHECK(*rep.rows[0].runtime_s >= 0.0);
}

TEST_CASE("risk sweep argument checks") {
  CHECK_THROWS_AS(evaluate_risk(all_specs(), small_suite(), {SampleSize::fraction(1.0)}, 0, 1,
                                Normalization::K2),
                  DomainError);
  CHECK_THROWS_AS(evaluate_risk({}, small_suite(), {SampleSize::fraction(1.0)}, 1, 1,
                                Normalization::K2),
                  DomainError);
}

TEST_CASE("grid convergence study") {
  EstimatorSpec spec;
  const auto rep = grid_convergence_study(1e4, 1e4, {11, 21, 41, 81, 161, 321}, spec);
  REQUIRE(rep.rows.size() == 6);
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].t_d >= rep.rows[i - 1].t_d - 2 * spec.tol);
  REQUIRE(rep.t_ref);
  CHECK(*rep.t_ref == rep.rows.back().t_d);
  std::vector<double> x, y;
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    x.push_back(std::log(rep.rows[i].d));
    y.push_back(std::log(*rep.t_ref - rep.rows[i].t_d));
  }
  REQUIRE(rep.fitted_exponent);
  CHECK(*rep.fitted_exponent == doctest::Approx(oracle::slope(x, y)).epsilon(1e-12));
  const std::string csv = convergence_csv(rep);
  CHECK(csv.rfind("s,d,t_d,t_ref_minus_t_d,duality_gap,iterations,status\n", 0) == 0);
  CHECK(csv.find("# fitted_exponent,") != std::string::npos);

  const auto single = grid_convergence_study(1e4, 1e4, {11}, spec);
  CHECK_FALSE(single.fitted_exponent);
  CHECK_THROWS_AS(grid_convergence_study(1e4, 1e4, {11, 20}, spec), InputError);
  CHECK_THROWS_AS(grid_convergence_study(1e4, 1e4, {21, 11}, spec), InputError);
  CHECK_THROWS_AS(grid_convergence_study(1e4, 1e4, {}, spec), InputError);
  CHECK_THROWS_AS(grid_convergence_study(1e4, 1e6, {11, 21}, spec), DomainError);
}

TEST_CASE("bias curve samples the objective") {
  const Polynomial p({-1.0, 1.5, -0.5, 0.07});
  const auto pts = bias_curve(p, IntervalSpec::range(1.0, 20.0), 200, 1e-3);
  REQUIRE(pts.size() == 200);
  CHECK(pts.front().lambda == 1.0);
  CHECK(pts.back().lambda == 20.0);
  for (const auto& b : pts) {
    const auto want = oracle::objective({-1.0, 1.5, -0.5, 0.07}, 1e-3, b.lambda);
    CHECK(b.g == doctest::Approx(static_cast<double>(want.g)).epsilon(1e-12));
    CHECK(b.bias == doctest::Approx(static_cast<double>(want.bias)).epsilon(1e-12));
    CHECK(b.variance >= 0.0);
  }
  CHECK(bias_csv(pts).rfind("lambda,bias,variance,g\n", 0) == 0);
  CHECK_THROWS_AS(bias_curve(p, IntervalSpec::range(1.0, 2.0), 1, 0.0), InvalidGrid);
}

TEST_CASE("CSV and JSON carry the generator name and 17 digits") {
  const auto rep = evaluate_risk({all_specs()[4]}, {make_distribution(DistKind::Uniform, 1e-2)},
                                 {SampleSize::fraction(1.0)}, 3, 1, Normalization::K2);
  const std::string csv = risk_csv(rep);
  CHECK(csv.rfind("estimator,distribution,n,trials,mean,std,mse,normalization,normalized_mse,seed,"
                  "runtime_s,support,k,status\n",
                  0) == 0);
  CHECK(to_json(rep)["prng"] == std::string(kPrngName));
  CHECK(fmt17(0.1) == "0.10000000000000001");
}

TEST_CASE("worked examples") {
  // A single trial's MSE is that trial's squared error.
  EstimatorSpec naive;
  naive.kind = EstimatorKind::Naive;
  const auto dist = make_distribution(DistKind::Uniform, 1e-2);
  const auto one = evaluate_risk({naive}, {dist}, {SampleSize::fraction(1.0)}, 1, 3,
                                 Normalization::K2);
  const double err = one.rows[0].mean - 100.0;
  CHECK(one.rows[0].mse == err * err);
  CHECK(one.rows[0].std == 0.0);

  // Counting is consistent once every symbol is seen.
  const auto big = evaluate_risk({naive}, {dist}, {SampleSize::fraction(50.0)}, 5, 3,
                                 Normalization::K2);
  CHECK(big.rows[0].normalized_mse == 0.0);

  // P(x) = x - 1 has its root at lambda = 1.
  const auto pts = bias_curve(Polynomial({-1.0, 1.0}), IntervalSpec::range(1.0, 2.0), 2, 0.0);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].bias == 0.0);
  CHECK(pts[1].bias == doctest::Approx(std::exp(-2.0)));
}
