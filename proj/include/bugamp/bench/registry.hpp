#pragma once

#include "bugamp/sim/problem.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace bugamp::bench {

class UnknownProblem : public Error {
public:
  explicit UnknownProblem(std::string_view name) : Error("unknown problem: " + std::string(name)) {}
};

/// The 17 benchmark problem names in their canonical order.
const std::vector<std::string>& list_problems();

/// Builds a fresh spec. Throws UnknownProblem.
ProblemSpec build_problem(std::string_view name);

/// Effect set and root cause of a problem. Throws UnknownProblem.
TaxonomyTag classify(std::string_view name);

/// Name, dim, bounds, parameter labels, taxonomy and witnesses as JSON.
nlohmann::json manifest(const ProblemSpec& problem);

}  // namespace bugamp::bench
