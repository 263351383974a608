#include "suppest/serialize.hpp"

#include <fmt/format.h>

namespace suppest {

using nlohmann::json;

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

namespace {

json strings(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(fmt17(v));
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

json to_json(const IntervalSpec& interval) {
  return {{"lo", interval.lo}, {"hi", interval.hi}, {"degenerate", interval.degenerate}};
}

json to_json(const Polynomial& p) {
  json out;
  out["degree"] = p.degree();
  out["coefficients"] = strings(p.coeffs());
  if (p.is_estimator()) {
    const GValues g = g_values(p);
    out["g_values"] = strings(g.values);
    out["g_tail"] = fmt17(g.tail);
  }
  return out;
}

json to_json(const SolveResult& result, const SipProblem& problem) {
  json out = to_json(result.coeffs);
  out["interval"] = to_json(problem.grid.interval());
  out["grid_points"] = problem.grid.size();
  out["grid_spacing"] = problem.grid.spacing();
  out["reg_weight"] = problem.reg_weight;
  out["t_d"] = fmt17(result.t_d);
  out["dual_value"] = fmt17(result.dual_value);
  out["duality_gap"] = fmt17(result.duality_gap);
  out["iterations"] = result.iterations;
  return out;
}

json to_json(const EstimateResult& result) {
  json out;
  out["estimator"] = std::string(to_token(result.kind));
  out["value"] = fmt17(result.value);
  if (result.coeffs) out["polynomial"] = to_json(*result.coeffs);
  const auto& d = result.diagnostics;
  json diag;
  if (result.coeffs) diag["degree"] = d.degree;
  if (d.interval) diag["interval"] = to_json(*d.interval);
  if (result.kind == EstimatorKind::Rwc || result.kind == EstimatorKind::RwcS) {
    diag["reg_weight"] = fmt17(d.reg_weight);
    diag["t_d"] = fmt17(d.t_d);
    diag["duality_gap"] = fmt17(d.duality_gap);
    diag["iterations"] = d.iterations;
  }
  if (d.fell_back) diag["fell_back"] = true;
  if (!d.note.empty()) diag["note"] = d.note;
  if (!diag.empty()) out["diagnostics"] = diag;
  return out;
}

std::string risk_csv(const RiskReport& report) {
  std::string out =
      "estimator,distribution,n,trials,mean,std,mse,normalization,normalized_mse,seed,runtime_s,"
      "support,k,status\n";
  for (const auto& r : report.rows) {
    const bool ok = r.ok();
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.estimator),
                       csv_field(r.distribution), r.n, r.trials, ok ? fmt17(r.mean) : "",
                       ok ? fmt17(r.std) : "", ok ? fmt17(r.mse) : "", to_token(r.normalization),
                       ok ? fmt17(r.normalized_mse) : "", r.seed,
                       r.runtime_s ? fmt17(*r.runtime_s) : "", r.support, r.k,
                       csv_field(r.status));
  }
  return out;
}

json to_json(const RiskReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row{{"estimator", r.estimator},
             {"distribution", r.distribution},
             {"n", r.n},
             {"trials", r.trials},
             {"normalization", std::string(to_token(r.normalization))},
             {"seed", r.seed},
             {"support", r.support},
             {"k", r.k},
             {"status", r.status}};
    if (r.ok()) {
      row["mean"] = fmt17(r.mean);
      row["std"] = fmt17(r.std);
      row["mse"] = fmt17(r.mse);
      row["normalized_mse"] = fmt17(r.normalized_mse);
    }
    if (r.runtime_s) row["runtime_s"] = fmt17(*r.runtime_s);
    rows.push_back(std::move(row));
  }
  return {{"prng", std::string(kPrngName)}, {"rows", rows}};
}

std::string worst_case_csv(const std::vector<WorstCaseRow>& rows) {
  std::string out = "estimator,size_index,worst_normalized_mse,worst_distribution,status\n";
  for (const auto& r : rows) {
    const bool ok = r.status == "ok";
    out += fmt::format("{},{},{},{},{}\n", csv_field(r.estimator), r.size_index,
                       ok ? fmt17(r.worst_normalized_mse) : "", csv_field(r.worst_distribution),
                       csv_field(r.status));
  }
  return out;
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::string out = "s,d,t_d,t_ref_minus_t_d,duality_gap,iterations,status\n";
  for (const auto& r : report.rows) {
    const bool ok = r.status == "ok";
    out += fmt::format("{},{},{},{},{},{},{}\n", r.s, fmt17(r.d), ok ? fmt17(r.t_d) : "",
                       ok && report.t_ref ? fmt17(*report.t_ref - r.t_d) : "",
                       fmt17(r.duality_gap), r.iterations, csv_field(r.status));
  }
  if (report.fitted_exponent) out += "# fitted_exponent," + fmt17(*report.fitted_exponent) + "\n";
  return out;
}

json to_json(const ConvergenceReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row{{"s", r.s},
             {"d", fmt17(r.d)},
             {"duality_gap", fmt17(r.duality_gap)},
             {"iterations", r.iterations},
             {"status", r.status}};
    if (r.status == "ok") row["t_d"] = fmt17(r.t_d);
    rows.push_back(std::move(row));
  }
  json out{{"rows", rows}};
  if (report.t_ref) out["t_ref"] = fmt17(*report.t_ref);
  out["fitted_exponent"] = report.fitted_exponent ? json(fmt17(*report.fitted_exponent)) : json();
  return out;
}

std::string bias_csv(const std::vector<BiasPoint>& points) {
  std::string out = "lambda,bias,variance,g\n";
  for (const auto& p : points)
    out += fmt::format("{},{},{},{}\n", fmt17(p.lambda), fmt17(p.bias), fmt17(p.variance),
                       fmt17(p.g));
  return out;
}

}  // namespace suppest
