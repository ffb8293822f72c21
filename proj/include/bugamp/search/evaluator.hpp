#pragma once

#include "bugamp/sim/simulate.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bugamp::search {

class BudgetExhausted : public Error {
public:
  BudgetExhausted(std::uint64_t requested, std::uint64_t remaining)
      : Error("budget exhausted: requested " + std::to_string(requested) + ", remaining " +
              std::to_string(remaining)) {}
};

/// Execution budget B. Every simulated trial debits one unit.
class BudgetLedger {
public:
  explicit BudgetLedger(std::uint64_t limit) : limit_(limit) {}

  std::uint64_t limit() const { return limit_; }
  std::uint64_t spent() const { return spent_; }
  std::uint64_t remaining() const { return limit_ - spent_; }
  bool can_afford(std::uint64_t n) const { return n <= remaining(); }

  void debit(std::uint64_t n) {
    if (!can_afford(n)) throw BudgetExhausted(n, remaining());
    spent_ += n;
  }

private:
  std::uint64_t limit_;
  std::uint64_t spent_ = 0;
};

/// A scored candidate. `score` is the observed failure frequency;
/// `rank_key` orders the ranking (equal to score except for model-ranked
/// methods, where it is the predicted failure probability).
struct CandidateEvaluation {
  ParamVector params;
  double score = 0.0;
  double rank_key = 0.0;
  std::uint64_t executions_spent = 0;
  std::vector<std::uint64_t> seeds_used;
};

/// One simulator execution as seen by a search method.
struct Execution {
  std::uint64_t index = 0;  // 0-based position in the run
  ParamVector params;
  std::uint64_t seed = 0;
  TrialOutcome outcome;
  bool failure = false;
  std::string tag;  // method-specific label, e.g. "random" or "ranked"
};

/// Ranking state captured when the budget crosses a checkpoint.
struct Snapshot {
  std::uint64_t checkpoint = 0;
  std::uint64_t spent = 0;
  std::vector<CandidateEvaluation> top;  // best first
};

struct RunOptions {
  std::uint64_t budget = 3900;
  std::uint64_t seed = 0;
  /// Budget values at which to snapshot the ranking. Checkpoints beyond what
  /// the method spends receive the final ranking.
  std::vector<std::uint64_t> checkpoints;
  std::size_t snapshot_depth = 10;
  SimulationOptions sim;
  /// Receives every execution in order, when set.
  std::function<void(const Execution&)> on_execution;
};

struct SearchResult {
  std::vector<CandidateEvaluation> ranking;  // best first
  std::vector<Snapshot> snapshots;           // one per requested checkpoint
  std::uint64_t spent = 0;
  bool early_stopped = false;
};

using Ranker = std::function<std::vector<CandidateEvaluation>()>;

/// Runs trials on behalf of a search method: debits the ledger, derives
/// per-execution seeds, logs, and snapshots the method's ranking whenever the
/// spent count reaches a checkpoint.
class Evaluator {
public:
  Evaluator(const ProblemSpec& problem, const RunOptions& options);

  const ProblemSpec& problem() const { return problem_; }
  const BudgetLedger& ledger() const { return ledger_; }
  std::uint64_t spent() const { return ledger_.spent(); }
  std::uint64_t remaining() const { return ledger_.remaining(); }

  /// The method's current ranking, consulted at checkpoints.
  void set_ranker(Ranker ranker) { ranker_ = std::move(ranker); }

  /// One trial; true iff it failed. Throws BudgetExhausted.
  bool execute(const ParamVector& params, const std::string& tag = {});

  /// k trials of one vector (score = failures / k). Checks the whole k
  /// against the budget before running any.
  CandidateEvaluation estimate_score(const ParamVector& params, std::uint64_t k, const std::string& tag = {});

  /// Fills snapshots for checkpoints not yet reached and returns the result.
  SearchResult finish(std::vector<CandidateEvaluation> final_ranking, bool early_stopped = false);

private:
  void snapshot_due();
  Snapshot take_snapshot(std::uint64_t checkpoint, std::vector<CandidateEvaluation> ranking) const;

  const ProblemSpec& problem_;
  RunOptions options_;
  BudgetLedger ledger_;
  Ranker ranker_;
  std::vector<Snapshot> snapshots_;
  std::size_t next_checkpoint_ = 0;
};

/// Stable sort by rank_key descending.
void sort_ranking(std::vector<CandidateEvaluation>& ranking);

}  // namespace bugamp::search
