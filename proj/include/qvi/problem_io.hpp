#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qvi/problem.hpp"
#include "qvi/solvers.hpp"

namespace qvi {

using AnyProblem = std::variant<QviProblem, ZeroProblem>;

/// Problem documents are JSON; see docs/problem-format.md. Schema violations
/// throw ConfigError naming the offending key.
AnyProblem problem_from_json(const nlohmann::json& doc);
AnyProblem problem_from_text(std::string_view text);

nlohmann::json to_json(const QviProblem& problem);
nlohmann::json to_json(const ZeroProblem& problem);
nlohmann::json to_json(const AnyProblem& problem);

/// "builtin:NAME" or a path to a problem file.
AnyProblem load_problem(const std::string& ref);

std::vector<std::string> builtin_names();
/// JSON text of a built-in problem; ConfigError for unknown names.
std::string_view builtin_text(std::string_view name);
AnyProblem builtin(std::string_view name);

}  // namespace qvi
