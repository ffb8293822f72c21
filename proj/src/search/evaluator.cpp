#include "bugamp/search/evaluator.hpp"

#include <algorithm>

namespace bugamp::search {

Evaluator::Evaluator(const ProblemSpec& problem, const RunOptions& options)
    : problem_(problem), options_(options), ledger_(options.budget) {
  std::sort(options_.checkpoints.begin(), options_.checkpoints.end());
  options_.checkpoints.erase(std::unique(options_.checkpoints.begin(), options_.checkpoints.end()),
                             options_.checkpoints.end());
}

bool Evaluator::execute(const ParamVector& params, const std::string& tag) {
  // Checkpoints reached by earlier executions are captured here, once the
  // method has folded those results into its ranking.
  snapshot_due();
  ledger_.debit(1);
  const std::uint64_t index = ledger_.spent() - 1;
  const std::uint64_t seed = derive_seed({options_.seed, index});
  const TrialOutcome outcome = simulate_trial(problem_, params, seed, options_.sim);
  const bool failed = problem_.is_failure(outcome);
  if (options_.on_execution) options_.on_execution({index, params, seed, outcome, failed, tag});
  return failed;
}

CandidateEvaluation Evaluator::estimate_score(const ParamVector& params, std::uint64_t k, const std::string& tag) {
  if (k == 0) throw Error("estimate_score needs k >= 1");
  if (!ledger_.can_afford(k)) throw BudgetExhausted(k, ledger_.remaining());
  CandidateEvaluation c;
  c.params = params;
  std::uint64_t failures = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    c.seeds_used.push_back(derive_seed({options_.seed, ledger_.spent()}));
    failures += execute(params, tag);
  }
  c.executions_spent = k;
  c.score = static_cast<double>(failures) / static_cast<double>(k);
  c.rank_key = c.score;
  return c;
}

void Evaluator::snapshot_due() {
  while (next_checkpoint_ < options_.checkpoints.size() && options_.checkpoints[next_checkpoint_] <= ledger_.spent()) {
    snapshots_.push_back(take_snapshot(options_.checkpoints[next_checkpoint_], ranker_ ? ranker_() : std::vector<CandidateEvaluation>{}));
    ++next_checkpoint_;
  }
}

Snapshot Evaluator::take_snapshot(std::uint64_t checkpoint, std::vector<CandidateEvaluation> ranking) const {
  Snapshot s;
  s.checkpoint = checkpoint;
  s.spent = ledger_.spent();
  if (ranking.size() > options_.snapshot_depth) ranking.resize(options_.snapshot_depth);
  s.top = std::move(ranking);
  return s;
}

SearchResult Evaluator::finish(std::vector<CandidateEvaluation> final_ranking, bool early_stopped) {
  for (; next_checkpoint_ < options_.checkpoints.size(); ++next_checkpoint_)
    snapshots_.push_back(take_snapshot(options_.checkpoints[next_checkpoint_], final_ranking));
  SearchResult r;
  r.ranking = std::move(final_ranking);
  r.snapshots = std::move(snapshots_);
  r.spent = ledger_.spent();
  r.early_stopped = early_stopped;
  return r;
}

void sort_ranking(std::vector<CandidateEvaluation>& ranking) {
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const CandidateEvaluation& a, const CandidateEvaluation& b) { return a.rank_key > b.rank_key; });
}

}  // namespace bugamp::search
