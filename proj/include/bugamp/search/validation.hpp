#pragma once

#include "bugamp/search/evaluator.hpp"

#include <map>
#include <vector>

namespace bugamp::search {

/// Failure frequency of `params` over M trials whose seeds come from a
/// stream disjoint from every search run. All candidates share the same M
/// seeds. Not debited from any budget.
double validate(const ProblemSpec& problem, const ParamVector& params, std::uint64_t M, std::uint64_t seed,
                const SimulationOptions& sim = {});

std::vector<double> final_validation(const ProblemSpec& problem, const std::vector<CandidateEvaluation>& candidates,
                                     std::uint64_t M, std::uint64_t seed, const SimulationOptions& sim = {});

/// Memoizes validate() per parameter vector.
class ValidationCache {
public:
  ValidationCache(const ProblemSpec& problem, std::uint64_t M, std::uint64_t seed, SimulationOptions sim = {})
      : problem_(problem), M_(M), seed_(seed), sim_(std::move(sim)) {}

  double operator()(const ParamVector& params);
  std::uint64_t executions() const { return executions_; }

private:
  struct Less {
    bool operator()(const ParamVector& a, const ParamVector& b) const;
  };
  const ProblemSpec& problem_;
  std::uint64_t M_;
  std::uint64_t seed_;
  SimulationOptions sim_;
  std::map<ParamVector, double, Less> cache_;
  std::uint64_t executions_ = 0;
};

}  // namespace bugamp::search
