#pragma once

#include "utm/problem.hpp"
#include "utm/spectrum.hpp"
#include "utm/wellposed.hpp"

#include <string>

// single-header nlohmann/json from vendor/
#include "json.hpp"

namespace utm {

/// Parse a problem-spec document. Field names are normative:
/// { "n", "a", "A", "T", "q0", "h" }. Schema violations throw
/// spec_error naming the offending path.
ProblemSpec parse_problem(const nlohmann::json& doc);
ProblemSpec parse_problem_text(const std::string& text);
ProblemSpec parse_problem_file(const std::string& path);

nlohmann::json to_json(const ProblemSpec& p);
nlohmann::json verdict_to_json(const Verdict& v, int n);
nlohmann::json spectrum_to_json(const Spectrum& sp);
std::string spectrum_to_csv(const Spectrum& sp);

} // namespace utm
