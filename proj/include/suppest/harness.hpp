#pragma once

// Experiment engine: seeded risk sweeps over distribution suites, nested-grid
// convergence studies, and dense bias/variance curves.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "suppest/distributions.hpp"
#include "suppest/estimators.hpp"

namespace suppest {

enum class Normalization { K2, S2 };

std::string_view to_token(Normalization norm);  // "k2" / "s2"
Normalization parse_normalization(std::string_view token);

// A sample size either fixed or as a multiple of each distribution's k.
struct SampleSize {
  double value = 1.0;
  bool relative = true;

  static SampleSize absolute(std::uint64_t n) { return {static_cast<double>(n), false}; }
  static SampleSize fraction(double f) { return {f, true}; }
  // Throws DomainError when the result is < 1.
  std::uint64_t resolve(std::uint64_t k) const;
};

struct RiskRow {
  std::string estimator;
  std::string distribution;
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation of the estimates
  double mse = 0.0;  // mean of (estimate - S)^2 over trials
  Normalization normalization = Normalization::K2;
  double normalized_mse = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> runtime_s;
  std::uint64_t support = 0;
  std::uint64_t k = 0;
  // "ok" or "error: <message>"; numeric fields are meaningless on errors.
  std::string status = "ok";
  std::size_t size_index = 0;  // position in the SampleSize list

  bool ok() const { return status == "ok"; }
};

struct RiskReport {
  std::vector<RiskRow> rows;
};

struct RiskOptions {
  unsigned threads = 1;
  bool record_runtime = false;
};

// Every estimator sees the same histograms: trial t of distribution d at
// sample size i draws from derive_seed(seed, {d, i, t}). Data-independent
// coefficients (RWC, WY) are solved once per cell; RWC-S solves once per
// distinct counting estimate. Rows come out ordered by (estimator,
// distribution, size) in input order, and are identical for any thread count.
RiskReport evaluate_risk(const std::vector<EstimatorSpec>& specs,
                         const std::vector<DistributionSpec>& dists,
                         const std::vector<SampleSize>& sizes, std::uint64_t trials,
                         std::uint64_t seed, Normalization normalization,
                         const RiskOptions& options = {});

// Max of normalized MSE over distributions per (estimator, size). An error in
// any cell makes the summary row an error too.
struct WorstCaseRow {
  std::string estimator;
  std::size_t size_index = 0;
  double worst_normalized_mse = 0.0;
  std::string worst_distribution;
  std::string status = "ok";
};
std::vector<WorstCaseRow> worst_case(const RiskReport& report);

struct ConvergenceRow {
  std::size_t s = 0;
  double d = 0.0;
  double t_d = 0.0;
  double duality_gap = 0.0;
  long iterations = 0;
  std::string status = "ok";
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::optional<double> t_ref;
  // Slope of ln(t_ref - t_d) against ln d over every grid but the finest.
  std::optional<double> fitted_exponent;
};

// s_list must be strictly increasing with every grid nested in the next
// ((s_prev - 1) divides (s - 1)); InputError otherwise. Uses the RWC problem
// (reg_weight 1/k) on the localized interval.
ConvergenceReport grid_convergence_study(double k, double n, const std::vector<std::size_t>& s_list,
                                         const EstimatorSpec& spec);

struct BiasPoint {
  double lambda = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double g = 0.0;
};

// points >= 2 samples of the objective components on the interval, endpoints
// included.
std::vector<BiasPoint> bias_curve(const Polynomial& p, const IntervalSpec& interval,
                                  std::size_t points, double reg_weight);

}  // namespace suppest
