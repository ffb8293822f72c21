#pragma once

#include "bugamp/learn/ens.hpp"
#include "bugamp/search/classic.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace bugamp::protocol {

enum class Method : std::uint8_t { BF, SA, GA, Ens };

inline constexpr std::array<Method, 4> kAllMethods = {Method::BF, Method::SA, Method::GA, Method::Ens};

/// Display name: "BF", "SA", "GA", "Ens".
std::string to_string(Method m);
/// Lower-case key used on the command line and in file names.
std::string method_key(Method m);
/// Accepts either form, case-insensitively.
Method parse_method(std::string_view s);

/// {100, 300, ..., B}: every 200 executions from 100, ending at B.
std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t budget);

inline constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();
inline bool is_absent(double v) { return std::isnan(v); }

struct ExperimentConfig {
  std::uint64_t budget = 3900;
  std::uint64_t trials = 50;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> checkpoints;  // empty: checkpoint_schedule(budget)
  std::uint64_t validation_m = 1000;
  std::optional<double> noise_scale;
  std::uint64_t k = 30;
  double sa_epsilon0 = 0.1;
  search::GAConfig ga;
  learn::EnsConfig ens;
  /// Keep every execution of each trial in TrialResult::executions.
  bool keep_executions = false;

  std::vector<std::uint64_t> effective_checkpoints() const;
};

/// One row of the records CSV.
struct ExperimentRecord {
  Method method = Method::BF;
  std::string problem;
  std::uint64_t trial = 0;
  std::uint64_t checkpoint = 0;
  std::uint64_t spent = 0;
  double best_score = kAbsent;
  double fifth_score = kAbsent;
  double tenth_score = kAbsent;
  ParamVector best_params;
};

struct TrialResult {
  std::vector<ExperimentRecord> records;
  search::SearchResult search;
  std::uint64_t validation_executions = 0;
  std::vector<search::Execution> executions;
};

/// Seed for one (problem, method, trial); distinct triples get unrelated streams.
std::uint64_t trial_seed(std::uint64_t master_seed, std::string_view problem, Method method, std::uint64_t trial);

/// Seed of the validation stream shared by every method on a problem.
std::uint64_t validation_seed(std::uint64_t master_seed, std::string_view problem);

/// Runs one search method with the given options.
search::SearchResult run_method(const ProblemSpec& problem, Method method, const search::RunOptions& options,
                                const ExperimentConfig& config);

/// The k-th best (1-indexed) entry, or nullptr when the ranking is shorter.
const search::CandidateEvaluation* top_k(const std::vector<search::CandidateEvaluation>& ranking, std::size_t k);

/// One trial: runs the method, then validates the top 10 of each checkpoint
/// snapshot with M fresh trials. Scores are best-so-far: the k-th largest
/// validated score among all candidates surfaced at or before the
/// checkpoint, absent while the method's ranking holds fewer than k entries.
TrialResult run_trial(const ProblemSpec& problem, Method method, std::uint64_t trial, const ExperimentConfig& config);

std::vector<ExperimentRecord> run_experiment(const ProblemSpec& problem, Method method, const ExperimentConfig& config);

// ----------------------------------------------------------------- campaigns

struct TrialKey {
  std::string problem;
  Method method;
  std::uint64_t trial;
};

using TrialCallback = std::function<void(const TrialKey&, const TrialResult&)>;

/// Every (problem, method, trial) triple, spread over `jobs` worker threads.
/// Records come back ordered by problem, method, trial and checkpoint as
/// given, whatever the completion order. The callback runs on the calling
/// thread, in that same order.
std::vector<ExperimentRecord> run_campaign(const std::vector<std::string>& problems, const std::vector<Method>& methods,
                                           const ExperimentConfig& config, unsigned jobs,
                                           const TrialCallback& on_trial = {});

// ---------------------------------------------------------------- CSV files

inline constexpr const char* kRecordsHeader =
    "method,problem,trial,checkpoint,spent,best_score,fifth_score,tenth_score,best_params_json";

/// Shortest round-trip decimal form; "nan" for absent values.
std::string format_number(double v);

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);

/// `method,problem,trial,exec_index,p0..p{dim-1},outcome` rows.
void write_execution_log(std::ostream& out, Method method, std::string_view problem, std::uint64_t trial,
                         const std::vector<search::Execution>& executions, bool header);

}  // namespace bugamp::protocol
