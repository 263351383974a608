#include "suppest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "suppest/errors.hpp"

namespace suppest {

std::string_view to_token(Normalization norm) { return norm == Normalization::K2 ? "k2" : "s2"; }

Normalization parse_normalization(std::string_view token) {
  if (token == "k2") return Normalization::K2;
  if (token == "s2") return Normalization::S2;
  throw InputError("unknown normalization '" + std::string(token) + "' (expected k2 or s2)");
}

std::uint64_t SampleSize::resolve(std::uint64_t k) const {
  const double n = relative ? std::round(value * static_cast<double>(k)) : value;
  if (!(n >= 1.0) || !std::isfinite(n))
    throw DomainError(fmt::format("sample size resolves to {:g} (< 1)", n));
  return static_cast<std::uint64_t>(n);
}

namespace {

using Clock = std::chrono::steady_clock;

// Runs fn(0..count-1) on up to `threads` workers. fn must not throw.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

// Data-independent coefficients for one (estimator, distribution, size)
// cell, or the reason they are unavailable.
struct Prepared {
  std::optional<Polynomial> poly;
  std::string error;
  double seconds = 0.0;
};

Prepared prepare_fixed(const EstimatorSpec& spec, double k, double n) {
  Prepared out;
  const auto start = Clock::now();
  try {
    if (spec.kind == EstimatorKind::Rwc) {
      out.poly = rwc_coefficients(k, n, spec).coeffs;
    } else if (spec.kind == EstimatorKind::Wy) {
      try {
        out.poly = wy_coefficients(k, n, spec.c0, spec.c1);
      } catch (const InputError&) {
        // The counting polynomial (-1) reproduces the counting estimator.
        if (!spec.fallback) throw;
        out.poly = Polynomial();
      }
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

Prepared prepare_rwcs(const EstimatorSpec& spec, double k, double n, double s_count) {
  Prepared out;
  const auto start = Clock::now();
  try {
    out.poly = rwcs_coefficients(k, n, s_count, spec).coeffs;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace

RiskReport evaluate_risk(const std::vector<EstimatorSpec>& specs,
                         const std::vector<DistributionSpec>& dists,
                         const std::vector<SampleSize>& sizes, std::uint64_t trials,
                         std::uint64_t seed, Normalization normalization,
                         const RiskOptions& options) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (specs.empty() || dists.empty() || sizes.empty())
    throw DomainError("need at least one estimator, distribution and sample size");
  for (const auto& spec : specs) spec.validate();

  const std::size_t D = dists.size();
  const std::size_t I = sizes.size();
  const std::size_t E = specs.size();
  const auto T = static_cast<std::size_t>(trials);

  std::vector<std::uint64_t> ks(D);
  std::vector<std::uint64_t> ns(D * I);
  for (std::size_t d = 0; d < D; ++d) {
    ks[d] = dists[d].k();
    for (std::size_t i = 0; i < I; ++i) ns[d * I + i] = sizes[i].resolve(ks[d]);
  }

  // Fingerprints for every (distribution, size, trial).
  std::vector<Sampler> samplers;
  samplers.reserve(D);
  for (const auto& dist : dists) samplers.emplace_back(dist);
  std::vector<Fingerprint> fps(D * I * T);
  std::vector<double> sample_seconds(D * I * T, 0.0);
  parallel_for(fps.size(), options.threads, [&](std::size_t idx) {
    const std::size_t d = idx / (I * T);
    const std::size_t i = (idx / T) % I;
    const std::size_t t = idx % T;
    const auto start = Clock::now();
    const auto counts = samplers[d].counts(ns[d * I + i], derive_seed(seed, {d, i, t}));
    fps[idx] = fingerprint_from_counts(counts);
    sample_seconds[idx] = std::chrono::duration<double>(Clock::now() - start).count();
  });

  // Coefficients: one per fixed cell, one per distinct counting estimate for
  // RWC-S.
  std::vector<Prepared> fixed(E * D * I);
  std::vector<std::map<std::uint64_t, Prepared>> rwcs(E * D * I);
  struct Job {
    std::size_t cell;
    std::uint64_t s_count;  // 0 for fixed cells
  };
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < E; ++e) {
    const auto kind = specs[e].kind;
    for (std::size_t d = 0; d < D; ++d)
      for (std::size_t i = 0; i < I; ++i) {
        const std::size_t cell = (e * D + d) * I + i;
        if (kind == EstimatorKind::Rwc || kind == EstimatorKind::Wy) {
          jobs.push_back({cell, 0});
        } else if (kind == EstimatorKind::RwcS) {
          for (std::size_t t = 0; t < T; ++t) {
            const std::uint64_t sc = fps[(d * I + i) * T + t].distinct();
            if (sc >= 1 && rwcs[cell].emplace(sc, Prepared{}).second) jobs.push_back({cell, sc});
          }
        }
      }
  }
  std::vector<Prepared> job_out(jobs.size());
  parallel_for(jobs.size(), options.threads, [&](std::size_t j) {
    const std::size_t cell = jobs[j].cell;
    const std::size_t e = cell / (D * I);
    const std::size_t d = (cell / I) % D;
    const std::size_t i = cell % I;
    const auto k = static_cast<double>(ks[d]);
    const auto n = static_cast<double>(ns[d * I + i]);
    job_out[j] = jobs[j].s_count == 0
                     ? prepare_fixed(specs[e], k, n)
                     : prepare_rwcs(specs[e], k, n, static_cast<double>(jobs[j].s_count));
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (jobs[j].s_count == 0)
      fixed[jobs[j].cell] = std::move(job_out[j]);
    else
      rwcs[jobs[j].cell][jobs[j].s_count] = std::move(job_out[j]);
  }

  RiskReport report;
  for (std::size_t e = 0; e < E; ++e) {
    const auto& spec = specs[e];
    for (std::size_t d = 0; d < D; ++d) {
      for (std::size_t i = 0; i < I; ++i) {
        const std::size_t cell = (e * D + d) * I + i;
        RiskRow row;
        row.estimator = std::string(to_token(spec.kind));
        row.distribution = dists[d].name();
        row.n = ns[d * I + i];
        row.trials = trials;
        row.normalization = normalization;
        row.seed = seed;
        row.support = dists[d].support;
        row.k = ks[d];
        row.size_index = i;

        const auto start = Clock::now();
        double seconds = 0.0;
        const auto truth = static_cast<double>(dists[d].support);
        std::vector<double> values(T);
        try {
          if (spec.kind == EstimatorKind::Rwc || spec.kind == EstimatorKind::Wy) {
            if (!fixed[cell].poly) throw NumericalError(fixed[cell].error);
            seconds += fixed[cell].seconds;
          }
          for (std::size_t t = 0; t < T; ++t) {
            const std::size_t f = (d * I + i) * T + t;
            const Fingerprint& fp = fps[f];
            seconds += sample_seconds[f];
            switch (spec.kind) {
              case EstimatorKind::Naive: values[t] = naive_count(fp); break;
              case EstimatorKind::GoodTuring:
                try {
                  values[t] = good_turing(fp, fp.n());
                } catch (const CoverageZero&) {
                  if (!spec.fallback) throw;
                  values[t] = naive_count(fp);
                }
                break;
              case EstimatorKind::Rwc:
              case EstimatorKind::Wy: values[t] = apply_poly_estimator(fp, *fixed[cell].poly); break;
              case EstimatorKind::RwcS: {
                const auto& prep = rwcs[cell].at(fp.distinct());
                if (!prep.poly) throw NumericalError(prep.error);
                values[t] = apply_poly_estimator(fp, *prep.poly);
                break;
              }
            }
          }
          double sum = 0.0;
          for (double v : values) sum += v;
          row.mean = sum / static_cast<double>(T);
          double sq_dev = 0.0;
          double sq_err = 0.0;
          for (double v : values) {
            sq_dev += (v - row.mean) * (v - row.mean);
            sq_err += (v - truth) * (v - truth);
          }
          row.std = std::sqrt(sq_dev / static_cast<double>(T));
          row.mse = sq_err / static_cast<double>(T);
          const double scale =
              normalization == Normalization::K2 ? static_cast<double>(row.k) : truth;
          row.normalized_mse = row.mse / (scale * scale);
        } catch (const std::exception& e) {
          row.status = std::string("error: ") + e.what();
        }
        if (options.record_runtime) {
          seconds += std::chrono::duration<double>(Clock::now() - start).count();
          if (spec.kind == EstimatorKind::RwcS)
            for (const auto& [sc, prep] : rwcs[cell]) seconds += prep.seconds;
          row.runtime_s = seconds;
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

std::vector<WorstCaseRow> worst_case(const RiskReport& report) {
  std::vector<WorstCaseRow> out;
  for (const auto& row : report.rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const WorstCaseRow& w) {
      return w.estimator == row.estimator && w.size_index == row.size_index;
    });
    if (it == out.end()) {
      out.push_back({row.estimator, row.size_index, -1.0, "", "ok"});
      it = out.end() - 1;
    }
    if (!row.ok()) {
      if (it->status == "ok") it->status = row.status;
      continue;
    }
    if (row.normalized_mse > it->worst_normalized_mse) {
      it->worst_normalized_mse = row.normalized_mse;
      it->worst_distribution = row.distribution;
    }
  }
  return out;
}

ConvergenceReport grid_convergence_study(double k, double n, const std::vector<std::size_t>& s_list,
                                         const EstimatorSpec& spec) {
  if (s_list.empty()) throw InputError("s_list is empty");
  for (std::size_t j = 0; j < s_list.size(); ++j) {
    if (s_list[j] < 2) throw InputError("every grid needs s >= 2");
    if (j > 0 && (s_list[j] <= s_list[j - 1] || (s_list[j] - 1) % (s_list[j - 1] - 1) != 0))
      throw InputError(fmt::format("grid s = {} does not refine s = {} (need (s_prev - 1) | (s - 1))",
                                   s_list[j], s_list[j - 1]));
  }
  EstimatorSpec base = spec;
  base.s = s_list.front();
  const SipProblem first = estimator_problem(k, n, 1.0 / k, base);
  if (first.grid.interval().degenerate)
    throw DomainError("localized interval is a single point; nothing to refine");

  ConvergenceReport report;
  for (std::size_t s : s_list) {
    ConvergenceRow row;
    row.s = s;
    SipProblem problem = first;
    problem.grid = build_grid(first.grid.interval(), s);
    row.d = problem.grid.spacing();
    try {
      SolveOptions options;
      options.tol = spec.tol;
      options.max_iter = spec.max_iter;
      const SolveResult r = solve(problem, options);
      row.t_d = r.t_d;
      row.duality_gap = r.duality_gap;
      row.iterations = r.iterations;
    } catch (const NonConvergence& e) {
      row.status = std::string("error: ") + e.what();
      row.duality_gap = e.best_gap();
    } catch (const NumericalError& e) {
      row.status = std::string("error: ") + e.what();
    }
    report.rows.push_back(row);
  }

  const auto& finest = report.rows.back();
  if (report.rows.size() < 2 || finest.status != "ok") return report;
  report.t_ref = finest.t_d;
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j + 1 < report.rows.size(); ++j) {
    const auto& row = report.rows[j];
    const double diff = *report.t_ref - row.t_d;
    if (row.status != "ok" || !(diff > 0.0)) continue;
    xs.push_back(std::log(row.d));
    ys.push_back(std::log(diff));
  }
  if (xs.size() < 2) return report;
  double mx = 0.0, my = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    mx += xs[j];
    my += ys[j];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sxy += (xs[j] - mx) * (ys[j] - my);
    sxx += (xs[j] - mx) * (xs[j] - mx);
  }
  report.fitted_exponent = sxy / sxx;
  return report;
}

std::vector<BiasPoint> bias_curve(const Polynomial& p, const IntervalSpec& interval,
                                  std::size_t points, double reg_weight) {
  if (points < 2) throw InvalidGrid("bias_curve: need at least 2 points");
  const GridSpec grid = build_grid(interval, points);
  std::vector<BiasPoint> out;
  out.reserve(points);
  for (double lam : grid.points()) {
    const ObjectiveTerms terms = objective_g(p, {reg_weight, lam});
    out.push_back({lam, terms.bias, terms.variance, terms.g});
  }
  return out;
}

}  // namespace suppest
