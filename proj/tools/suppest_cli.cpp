// suppest: support-size estimation from samples.
//
//   suppest estimate <file> [--counts] [--estimator rwc-s ...]
//   suppest coeffs --k 1e6 --n 1e6 --estimator rwc
//   suppest simulate --min-mass 1e-4 --n-frac 1.0 --trials 100 --seed 7
//   suppest converge --k 1e4 --n 1e4
//   suppest bias-curve --k 1e6 --n 1e6 --estimator wy
//
// Exit codes: 0 ok, 1 input or validation error, 2 numerical failure.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "suppest/distributions.hpp"
#include "suppest/errors.hpp"
#include "suppest/estimators.hpp"
#include "suppest/harness.hpp"
#include "suppest/histogram.hpp"
#include "suppest/serialize.hpp"

using namespace suppest;
using nlohmann::json;

namespace {

struct SolverFlags {
  double c0 = 0.558;
  double c1 = 0.5;
  std::size_t s = 1000;
  double tol = 1e-8;
  long max_iter = 200000;
  bool fallback = false;

  void attach(CLI::App* cmd, bool with_fallback = true) {
    cmd->add_option("--c0", c0, "Degree constant, L = floor(c0 ln k)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--c1", c1, "WY interval constant, r = c1 ln k")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--s", s, "Grid points on the optimization interval")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
    cmd->add_option("--tol", tol, "Solver duality-gap tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", max_iter, "Solver Newton-step budget")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    if (with_fallback)
      cmd->add_flag("--fallback", fallback,
                    "Use the counting estimate when WY's interval collapses or GT's coverage is "
                    "zero");
  }

  EstimatorSpec spec(EstimatorKind kind) const {
    EstimatorSpec out;
    out.kind = kind;
    out.c0 = c0;
    out.c1 = c1;
    out.s = s;
    out.tol = tol;
    out.max_iter = max_iter;
    out.fallback = fallback;
    return out;
  }
};

unsigned default_threads() {
  if (const char* env = std::getenv("SUPPEST_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InputError(fmt::format("SUPPEST_THREADS must be a positive integer, got '{}'", env));
  }
  return 1;
}

std::vector<EstimatorKind> parse_kinds(const std::vector<std::string>& tokens) {
  std::vector<EstimatorKind> out;
  for (const auto& t : tokens) {
    const EstimatorKind kind = parse_estimator_kind(t);
    if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
  }
  return out;
}

void emit(const std::string& text) {
  std::cout << text;
  std::cout.flush();
}

void emit_json(const json& j) { emit(j.dump(2) + "\n"); }

// ---- estimate ------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  bool counts = false;
  bool fingerprint = false;
  std::vector<std::string> estimators{"rwc", "rwc-s", "wy", "gt", "naive"};
  std::optional<double> k;
  bool clamp = false;
  std::string format = "json";
  SolverFlags solver;
};

int run_estimate(const EstimateArgs& a) {
  Fingerprint fp;
  if (a.fingerprint) {
    std::ifstream in(a.input, std::ios::binary);
    if (!in) throw InputError("cannot open " + a.input);
    fp = parse_fingerprint(in);
  } else if (a.counts) {
    fp = fingerprint(histogram_from_counts_file(a.input));
  } else {
    const auto tokens = tokenize_text(read_file(a.input));
    fp = fingerprint(histogram_from_tokens(tokens));
  }
  const auto n = fp.n();
  const double k = a.k ? *a.k : static_cast<double>(n);

  json meta{{"input", a.input},
            {"input_kind", a.fingerprint ? "fingerprint" : a.counts ? "counts" : "text"},
            {"n", n},
            {"distinct", fp.distinct()},
            {"h1", fp.h(1)},
            {"k", k},
            {"k_source", a.k ? "flag" : "default"}};
  if (!a.k) meta["warning"] = "k not supplied; k defaults to the sample size n";
  if (a.clamp) meta["clamp"] = "estimates clamped to [distinct, k]";

  json results = json::array();
  std::string csv = "estimator,value,clamped\n";
  for (EstimatorKind kind : parse_kinds(a.estimators)) {
    EstimateResult r = estimate(a.solver.spec(kind), fp, k);
    bool clamped = false;
    if (a.clamp) {
      const double lo = static_cast<double>(fp.distinct());
      const double v = std::clamp(r.value, lo, std::max(lo, k));
      clamped = v != r.value;
      r.value = v;
    }
    json j = to_json(r);
    if (a.clamp) j["clamped"] = clamped;
    results.push_back(std::move(j));
    csv += fmt::format("{},{},{}\n", to_token(kind), fmt17(r.value), clamped ? "true" : "false");
  }
  if (a.format == "csv")
    emit(csv);
  else
    emit_json({{"metadata", meta}, {"estimates", results}});
  return 0;
}

// ---- coeffs --------------------------------------------------------------

struct CoeffsArgs {
  double k = 0.0;
  double n = 0.0;
  std::string estimator = "rwc";
  std::optional<double> s_count;
  SolverFlags solver;
};

int run_coeffs(const CoeffsArgs& a) {
  const EstimatorKind kind = parse_estimator_kind(a.estimator);
  json out{{"estimator", std::string(to_token(kind))}, {"k", a.k}, {"n", a.n}};
  const EstimatorSpec spec = a.solver.spec(kind);
  switch (kind) {
    case EstimatorKind::Wy: {
      const Polynomial p = wy_coefficients(a.k, a.n, spec.c0, spec.c1);
      out.update(to_json(p));
      out["interval"] = to_json(wy_interval(a.k, a.n, spec.c1));
      break;
    }
    case EstimatorKind::Rwc:
    case EstimatorKind::RwcS: {
      double reg = 1.0 / a.k;
      if (kind == EstimatorKind::RwcS) {
        if (!a.s_count) throw InputError("coeffs --estimator rwc-s needs --s-count");
        if (!(*a.s_count >= 1.0)) throw DomainError("--s-count must be >= 1");
        reg = 1.0 / *a.s_count;
        out["s_count"] = *a.s_count;
      }
      const SipProblem problem = estimator_problem(a.k, a.n, reg, spec);
      SolveOptions options;
      options.tol = spec.tol;
      options.max_iter = spec.max_iter;
      const SolveResult r = solve(problem, options);
      out.update(to_json(r, problem));
      out["tol"] = spec.tol;
      break;
    }
    default:
      throw InputError("coeffs supports rwc, rwc-s and wy only");
  }
  emit_json(out);
  return 0;
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::vector<std::string> dists{"suite"};
  double min_mass = 1e-4;
  std::vector<double> n_frac;
  std::vector<std::uint64_t> n_abs;
  std::uint64_t trials = 100;
  std::uint64_t seed = 20240101;
  std::string normalization = "k2";
  std::vector<std::string> estimators{"rwc", "rwc-s", "wy", "gt", "naive"};
  std::string format = "csv";
  bool worst = false;
  bool record_runtime = false;
  unsigned threads = 1;
  SolverFlags solver;
};

int run_simulate(const SimulateArgs& a) {
  std::vector<DistributionSpec> dists;
  for (const auto& name : a.dists) {
    if (name == "suite") {
      for (auto& d : standard_suite(a.min_mass)) dists.push_back(d);
    } else {
      dists.push_back(make_distribution(name, a.min_mass));
    }
  }
  std::vector<SampleSize> sizes;
  for (double f : a.n_frac) sizes.push_back(SampleSize::fraction(f));
  for (auto n : a.n_abs) sizes.push_back(SampleSize::absolute(n));
  if (sizes.empty()) sizes.push_back(SampleSize::fraction(1.0));

  std::vector<EstimatorSpec> specs;
  for (EstimatorKind kind : parse_kinds(a.estimators)) specs.push_back(a.solver.spec(kind));

  RiskOptions options;
  options.threads = a.threads;
  options.record_runtime = a.record_runtime;
  const RiskReport report = evaluate_risk(specs, dists, sizes, a.trials, a.seed,
                                          parse_normalization(a.normalization), options);
  if (a.worst) {
    const auto rows = worst_case(report);
    if (a.format == "json") {
      json arr = json::array();
      for (const auto& r : rows) {
        json j{{"estimator", r.estimator}, {"size_index", r.size_index}, {"status", r.status}};
        if (r.status == "ok") {
          j["worst_normalized_mse"] = fmt17(r.worst_normalized_mse);
          j["worst_distribution"] = r.worst_distribution;
        }
        arr.push_back(std::move(j));
      }
      emit_json({{"prng", std::string(kPrngName)}, {"worst_case", arr}});
    } else {
      emit(worst_case_csv(rows));
    }
  } else if (a.format == "json") {
    emit_json(to_json(report));
  } else {
    emit(risk_csv(report));
  }
  for (const auto& r : report.rows)
    if (r.ok()) return 0;
  return 2;
}

// ---- converge ------------------------------------------------------------

struct ConvergeArgs {
  double k = 1e4;
  double n = 1e4;
  std::vector<std::size_t> s_list{11, 21, 41, 81, 161, 5121};
  std::string format = "csv";
  SolverFlags solver;
};

int run_converge(const ConvergeArgs& a) {
  const ConvergenceReport report =
      grid_convergence_study(a.k, a.n, a.s_list, a.solver.spec(EstimatorKind::Rwc));
  if (a.format == "json")
    emit_json(to_json(report));
  else
    emit(convergence_csv(report));
  return 0;
}

// ---- bias-curve ----------------------------------------------------------

struct BiasArgs {
  double k = 1e6;
  double n = 1e6;
  std::string estimator = "rwc";
  std::optional<double> s_count;
  std::size_t points = 1000;
  std::optional<double> lo;
  std::optional<double> hi;
  SolverFlags solver;
};

int run_bias(const BiasArgs& a) {
  const EstimatorKind kind = parse_estimator_kind(a.estimator);
  const EstimatorSpec spec = a.solver.spec(kind);
  Polynomial p;
  double reg = 1.0 / a.k;
  switch (kind) {
    case EstimatorKind::Wy: p = wy_coefficients(a.k, a.n, spec.c0, spec.c1); break;
    case EstimatorKind::Rwc: p = rwc_coefficients(a.k, a.n, spec).coeffs; break;
    case EstimatorKind::RwcS:
      if (!a.s_count) throw InputError("bias-curve --estimator rwc-s needs --s-count");
      reg = 1.0 / *a.s_count;
      p = rwcs_coefficients(a.k, a.n, *a.s_count, spec).coeffs;
      break;
    default: throw InputError("bias-curve supports rwc, rwc-s and wy only");
  }
  const int L = degree_for(a.k, spec.c0);
  const double lo = a.lo ? *a.lo : a.n / a.k;
  const double hi = a.hi ? *a.hi : std::max(lo, kLocalizationFactor * std::max(L, 1));
  emit(bias_csv(bias_curve(p, IntervalSpec::range(lo, hi), a.points, reg)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Support-size estimation from samples"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "suppest 1.0 (" + std::string(kPrngName) + ")");

  unsigned threads = 1;
  try {
    threads = default_threads();
  } catch (const InputError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  auto add_threads = [&](CLI::App* cmd, unsigned& target) {
    target = threads;
    cmd->add_option("--threads", target, "Worker threads (env SUPPEST_THREADS)")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1024u));
  };
  const auto formats = CLI::IsMember({"csv", "json"});

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Estimate the support size of a sample");
  c_est->add_option("input", est.input, "Text file (default), counts file or fingerprint file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* f_counts = c_est->add_flag("--counts", est.counts,
                                   "Input is a counts file: `symbol<TAB>count` or bare counts");
  c_est->add_flag("--fingerprint", est.fingerprint, "Input is a `j<TAB>h_j` fingerprint file")
      ->excludes(f_counts);
  c_est->add_option("--estimator", est.estimators, "Estimators: rwc, rwc-s, wy, gt, naive")
      ->delimiter(',')
      ->capture_default_str();
  c_est->add_option("--k", est.k, "Bound on 1/(minimum mass); defaults to the sample size n")
      ->check(CLI::PositiveNumber);
  c_est->add_flag("--clamp", est.clamp, "Clamp estimates to [distinct, k]");
  c_est->add_option("--format", est.format, "Output format")->capture_default_str()->check(formats);
  est.solver.attach(c_est);

  CoeffsArgs co;
  auto* c_co = app.add_subcommand("coeffs", "Print estimator coefficients as JSON");
  c_co->add_option("--k", co.k, "k")->required()->check(CLI::PositiveNumber);
  c_co->add_option("--n", co.n, "Sample size n")->required()->check(CLI::PositiveNumber);
  c_co->add_option("--estimator", co.estimator, "rwc, rwc-s or wy")->capture_default_str();
  c_co->add_option("--s-count", co.s_count, "Counting estimate for rwc-s")
      ->check(CLI::PositiveNumber);
  co.solver.attach(c_co, false);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Seeded risk sweep over synthetic distributions");
  c_sim->add_option("--dist", sim.dists,
                    "Distributions: suite (uniform, zipf 1.5/1/0.5/0.25, benford), uniform, "
                    "benford, zipf:<alpha>")
      ->delimiter(',')
      ->capture_default_str();
  c_sim->add_option("--min-mass", sim.min_mass, "Target minimum probability mass")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  c_sim->add_option("--n-frac", sim.n_frac, "Sample sizes as multiples of k (default 1.0)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--n", sim.n_abs, "Absolute sample sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--trials", sim.trials, "Trials per cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  c_sim->add_option("--normalization", sim.normalization, "MSE normalization: k2 or s2")
      ->capture_default_str()
      ->check(CLI::IsMember({"k2", "s2"}));
  c_sim->add_option("--estimator", sim.estimators, "Estimators: rwc, rwc-s, wy, gt, naive")
      ->delimiter(',')
      ->capture_default_str();
  c_sim->add_option("--format", sim.format, "Output format")->capture_default_str()->check(formats);
  c_sim->add_flag("--worst-case", sim.worst,
                  "Print the max normalized MSE over distributions instead of every row");
  c_sim->add_flag("--record-runtime", sim.record_runtime,
                  "Fill the runtime_s column (makes output nondeterministic)");
  add_threads(c_sim, sim.threads);
  sim.solver.attach(c_sim);

  ConvergeArgs cv;
  auto* c_cv = app.add_subcommand("converge", "Nested-grid convergence study of t_d");
  c_cv->add_option("--k", cv.k, "k")->capture_default_str()->check(CLI::PositiveNumber);
  c_cv->add_option("--n", cv.n, "Sample size n")->capture_default_str()->check(CLI::PositiveNumber);
  c_cv->add_option("--s-list", cv.s_list, "Nested grid sizes, finest last (used as reference)")
      ->delimiter(',')
      ->capture_default_str();
  c_cv->add_option("--format", cv.format, "Output format")->capture_default_str()->check(formats);
  cv.solver.attach(c_cv, false);

  BiasArgs bi;
  auto* c_bi = app.add_subcommand("bias-curve", "Dense bias/variance/objective table as CSV");
  c_bi->add_option("--k", bi.k, "k")->capture_default_str()->check(CLI::PositiveNumber);
  c_bi->add_option("--n", bi.n, "Sample size n")->capture_default_str()->check(CLI::PositiveNumber);
  c_bi->add_option("--estimator", bi.estimator, "rwc, rwc-s or wy")->capture_default_str();
  c_bi->add_option("--s-count", bi.s_count, "Counting estimate for rwc-s")
      ->check(CLI::PositiveNumber);
  c_bi->add_option("--points", bi.points, "Evaluation points")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  c_bi->add_option("--lo", bi.lo, "Interval start (default n/k)")->check(CLI::PositiveNumber);
  c_bi->add_option("--hi", bi.hi, "Interval end (default 6.5 L)")->check(CLI::PositiveNumber);
  bi.solver.attach(c_bi, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_est->parsed()) return run_estimate(est);
    if (c_co->parsed()) return run_coeffs(co);
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_cv->parsed()) return run_converge(cv);
    if (c_bi->parsed()) return run_bias(bi);
  } catch (const InputError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  } catch (const NumericalError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return 2;
  }
  return 1;
}
