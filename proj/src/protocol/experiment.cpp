#include "bugamp/protocol/experiment.hpp"

#include "bugamp/bench/registry.hpp"
#include "bugamp/search/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <condition_variable>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

namespace bugamp::protocol {

namespace {

constexpr std::uint64_t kTrialStream = 0x747269616cULL;
constexpr std::uint64_t kValidationStream = 0x76616c6964ULL;

std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

struct ParamLess {
  bool operator()(const ParamVector& a, const ParamVector& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  }
};

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::BF: return "BF";
    case Method::SA: return "SA";
    case Method::GA: return "GA";
    case Method::Ens: return "Ens";
  }
  return "?";
}

std::string method_key(Method m) {
  std::string s = to_string(m);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Method parse_method(std::string_view s) {
  std::string lower(s);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (Method m : kAllMethods)
    if (method_key(m) == lower) return m;
  throw Error("unknown method '" + std::string(s) + "' (expected bf, sa, ga or ens)");
}

std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t budget) {
  std::vector<std::uint64_t> points;
  for (std::uint64_t c = 100; c <= budget; c += 200) points.push_back(c);
  if (points.empty() || points.back() != budget) points.push_back(budget);
  return points;
}

std::vector<std::uint64_t> ExperimentConfig::effective_checkpoints() const {
  if (checkpoints.empty()) return checkpoint_schedule(budget);
  auto c = checkpoints;
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::string_view problem, Method method, std::uint64_t trial) {
  return derive_seed({master_seed, kTrialStream, hash_name(problem), static_cast<std::uint64_t>(method), trial});
}

std::uint64_t validation_seed(std::uint64_t master_seed, std::string_view problem) {
  return derive_seed({master_seed, kValidationStream, hash_name(problem)});
}

search::SearchResult run_method(const ProblemSpec& problem, Method method, const search::RunOptions& options,
                                const ExperimentConfig& config) {
  switch (method) {
    case Method::BF: return search::brute_force(problem, options, config.k);
    case Method::SA: return search::sa_search(problem, options, config.k, config.sa_epsilon0);
    case Method::GA: return search::ga_search(problem, options, config.ga);
    case Method::Ens: return learn::ens_search(problem, options, config.ens);
  }
  throw Error("unknown method");
}

const search::CandidateEvaluation* top_k(const std::vector<search::CandidateEvaluation>& ranking, std::size_t k) {
  if (k == 0 || ranking.size() < k) return nullptr;
  return &ranking[k - 1];
}

TrialResult run_trial(const ProblemSpec& problem, Method method, std::uint64_t trial, const ExperimentConfig& config) {
  TrialResult result;
  search::RunOptions opts;
  opts.budget = config.budget;
  opts.seed = trial_seed(config.master_seed, problem.name, method, trial);
  opts.checkpoints = config.effective_checkpoints();
  opts.snapshot_depth = 10;
  opts.sim.noise_scale = config.noise_scale;
  if (config.keep_executions) opts.on_execution = [&result](const search::Execution& e) { result.executions.push_back(e); };
  result.search = run_method(problem, method, opts, config);

  search::ValidationCache validate(problem, config.validation_m, validation_seed(config.master_seed, problem.name),
                                   opts.sim);
  std::vector<std::pair<double, ParamVector>> pool;
  std::set<ParamVector, ParamLess> seen;
  for (const auto& snap : result.search.snapshots) {
    for (const auto& c : snap.top)
      if (seen.insert(c.params).second) pool.emplace_back(validate(c.params), c.params);
    std::stable_sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    ExperimentRecord r;
    r.method = method;
    r.problem = problem.name;
    r.trial = trial;
    r.checkpoint = snap.checkpoint;
    r.spent = snap.spent;
    if (!snap.top.empty()) {
      r.best_score = pool[0].first;
      r.best_params = pool[0].second;
    }
    if (snap.top.size() >= 5) r.fifth_score = pool[4].first;
    if (snap.top.size() >= 10) r.tenth_score = pool[9].first;
    result.records.push_back(std::move(r));
  }
  result.validation_executions = validate.executions();
  return result;
}

std::vector<ExperimentRecord> run_experiment(const ProblemSpec& problem, Method method, const ExperimentConfig& config) {
  std::vector<ExperimentRecord> out;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    auto r = run_trial(problem, method, t, config);
    out.insert(out.end(), r.records.begin(), r.records.end());
  }
  return out;
}

std::vector<ExperimentRecord> run_campaign(const std::vector<std::string>& problems, const std::vector<Method>& methods,
                                           const ExperimentConfig& config, unsigned jobs,
                                           const TrialCallback& on_trial) {
  std::vector<TrialKey> keys;
  for (const auto& p : problems)
    for (Method m : methods)
      for (std::uint64_t t = 0; t < config.trials; ++t) keys.push_back({p, m, t});
  // Build every problem up front so unknown names fail before any work.
  std::vector<ProblemSpec> specs;
  for (const auto& p : problems) specs.push_back(bench::build_problem(p));
  auto spec_of = [&](const std::string& name) -> const ProblemSpec& {
    return specs[static_cast<std::size_t>(std::find(problems.begin(), problems.end(), name) - problems.begin())];
  };

  std::vector<std::optional<TrialResult>> results(keys.size());
  std::vector<std::exception_ptr> errors(keys.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  auto run_one = [&](std::size_t i) {
    std::optional<TrialResult> r;
    std::exception_ptr err;
    try {
      r = run_trial(spec_of(keys[i].problem), keys[i].method, keys[i].trial, config);
    } catch (...) {
      err = std::current_exception();
    }
    std::lock_guard lock(mu);
    results[i] = std::move(r);
    errors[i] = err;
    if (err && !results[i]) results[i].emplace();
    cv.notify_all();
  };
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < keys.size();) run_one(i);
  };

  std::vector<std::thread> pool;
  const unsigned n = std::max(1u, jobs);
  if (n > 1)
    for (unsigned j = 0; j < n; ++j) pool.emplace_back(worker);

  std::vector<ExperimentRecord> records;
  std::exception_ptr first_error;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (n == 1) run_one(i);
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return results[i].has_value(); });
    if (errors[i]) {
      if (!first_error) first_error = errors[i];
      continue;
    }
    TrialResult r = std::move(*results[i]);
    results[i].reset();
    lock.unlock();
    if (on_trial) on_trial(keys[i], r);
    records.insert(records.end(), r.records.begin(), r.records.end());
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

// ---------------------------------------------------------------- CSV files

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string params_json(const ParamVector& p) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += format_number(p[i]);
  }
  return s + "]";
}

double parse_number(const std::string& s) {
  if (s == "nan" || s.empty()) return kAbsent;
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw Error("bad number '" + s + "' in records file");
  return v;
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.method) << ',' << r.problem << ',' << r.trial << ',' << r.checkpoint << ',' << r.spent << ','
        << format_number(r.best_score) << ',' << format_number(r.fifth_score) << ',' << format_number(r.tenth_score)
        << ",\"" << params_json(r.best_params) << "\"\n";
  }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::vector<ExperimentRecord> out;
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) throw Error("records file lacks the expected header");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (int i = 0; i < 8; ++i) {
      const std::size_t c = line.find(',', pos);
      if (c == std::string::npos) throw Error("records line " + std::to_string(lineno) + " has too few fields");
      f.push_back(line.substr(pos, c - pos));
      pos = c + 1;
    }
    std::string json = line.substr(pos);
    if (json.size() >= 2 && json.front() == '"' && json.back() == '"') json = json.substr(1, json.size() - 2);
    ExperimentRecord r;
    r.method = parse_method(f[0]);
    r.problem = f[1];
    r.trial = std::stoull(f[2]);
    r.checkpoint = std::stoull(f[3]);
    r.spent = std::stoull(f[4]);
    r.best_score = parse_number(f[5]);
    r.fifth_score = parse_number(f[6]);
    r.tenth_score = parse_number(f[7]);
    const auto arr = nlohmann::json::parse(json);
    r.best_params.resize(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) r.best_params[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

void write_execution_log(std::ostream& out, Method method, std::string_view problem, std::uint64_t trial,
                         const std::vector<search::Execution>& executions, bool header) {
  if (header) {
    out << "method,problem,trial,exec_index";
    const auto dim = executions.empty() ? 0 : executions.front().params.size();
    for (Eigen::Index j = 0; j < dim; ++j) out << ",p" << j;
    out << ",outcome\n";
  }
  for (const auto& e : executions) {
    out << to_string(method) << ',' << problem << ',' << trial << ',' << e.index;
    for (Eigen::Index j = 0; j < e.params.size(); ++j) out << ',' << format_number(e.params[j]);
    out << ',' << describe(e.outcome) << '\n';
  }
}

}  // namespace bugamp::protocol
