#include "bugamp/search/validation.hpp"

#include <algorithm>

namespace bugamp::search {

namespace {
constexpr std::uint64_t kValidationStream = 0x76616c6964ULL;
}

double validate(const ProblemSpec& problem, const ParamVector& params, std::uint64_t M, std::uint64_t seed,
                const SimulationOptions& sim) {
  if (M == 0) throw Error("validation needs M >= 1");
  std::uint64_t failures = 0;
  for (std::uint64_t j = 0; j < M; ++j)
    failures += problem.is_failure(simulate_trial(problem, params, derive_seed({seed, kValidationStream, j}), sim));
  return static_cast<double>(failures) / static_cast<double>(M);
}

std::vector<double> final_validation(const ProblemSpec& problem, const std::vector<CandidateEvaluation>& candidates,
                                     std::uint64_t M, std::uint64_t seed, const SimulationOptions& sim) {
  std::vector<double> out;
  for (const auto& c : candidates) out.push_back(validate(problem, c.params, M, seed, sim));
  return out;
}

bool ValidationCache::Less::operator()(const ParamVector& a, const ParamVector& b) const {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

double ValidationCache::operator()(const ParamVector& params) {
  auto it = cache_.find(params);
  if (it != cache_.end()) return it->second;
  executions_ += M_;
  const double v = validate(problem_, params, M_, seed_, sim_);
  cache_.emplace(params, v);
  return v;
}

}  // namespace bugamp::search
