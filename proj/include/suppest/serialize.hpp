#pragma once

// JSON and CSV renderings. Floats are printed with 17 significant digits so
// they round-trip; coefficient vectors are emitted as decimal strings.

#include <string>
#include <vector>

#include "json.hpp"

#include "suppest/estimators.hpp"
#include "suppest/harness.hpp"

namespace suppest {

// "{:.17g}"
std::string fmt17(double v);

nlohmann::json to_json(const IntervalSpec& interval);
nlohmann::json to_json(const Polynomial& p);  // {"coefficients": [...], "g_values": [...]}
nlohmann::json to_json(const SolveResult& result, const SipProblem& problem);
nlohmann::json to_json(const EstimateResult& result);

std::string risk_csv(const RiskReport& report);
nlohmann::json to_json(const RiskReport& report);
std::string worst_case_csv(const std::vector<WorstCaseRow>& rows);

// Ends with a "# fitted_exponent,<value>" line when an exponent exists.
std::string convergence_csv(const ConvergenceReport& report);
nlohmann::json to_json(const ConvergenceReport& report);

std::string bias_csv(const std::vector<BiasPoint>& points);

}  // namespace suppest
