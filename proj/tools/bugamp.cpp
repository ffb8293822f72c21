// bugamp: run amplification experiments, describe problems, replay traces.
#include "bugamp/bench/registry.hpp"
#include "bugamp/protocol/experiment.hpp"
#include "bugamp/stats/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

using namespace bugamp;
namespace fs = std::filesystem;

namespace {

class ConfigError : public Error {
public:
  ConfigError(const std::string& field, const std::string& what) : Error(field + ": " + what) {}
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

std::uint64_t parse_u64(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const auto n = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a non-negative integer, got '" + v + "'");
  }
}

double parse_real(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a number, got '" + v + "'");
  }
}

/// Every run setting as text, with the source that supplied it.
struct RunConfig {
  static inline const std::vector<std::string> kFields = {
      "profile", "problems", "methods", "budget", "trials", "master_seed", "checkpoints",
      "noise_amplitude", "validation_m", "out_dir", "jobs", "log_executions"};

  std::map<std::string, std::pair<std::string, std::string>> values;  // field -> (value, source)

  void set(const std::string& field, const std::string& value, const std::string& source) {
    if (std::find(kFields.begin(), kFields.end(), field) == kFields.end())
      throw ConfigError(field, "unknown configuration field");
    values[field] = {value, source};
  }
  const std::string& get(const std::string& field) const { return values.at(field).first; }
  bool has(const std::string& field) const { return values.count(field) > 0; }
};

void apply_profile(RunConfig& cfg, const std::string& profile, const std::string& source) {
  if (profile == "desk") {
    cfg.set("budget", "1300", source);
    cfg.set("trials", "10", source);
  } else if (profile == "full") {
    cfg.set("budget", "3900", source);
    cfg.set("trials", "50", source);
  } else {
    throw ConfigError("profile", "expected desk or full, got '" + profile + "'");
  }
  cfg.set("profile", profile, source);
}

/// Flat `key = value` lines (with # comments) or a JSON object.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  std::map<std::string, std::string> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::json::parse(text);
    for (const auto& [k, v] : j.items()) {
      if (v.is_string()) {
        out[k] = v.get<std::string>();
      } else if (v.is_array()) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
        out[k] = s;
      } else {
        out[k] = v.dump();
      }
    }
    return out;
  }
  std::stringstream lines(text);
  int lineno = 0;
  for (std::string line; std::getline(lines, line);) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config", path + ":" + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

struct ResolvedRun {
  std::vector<std::string> problems;
  std::vector<protocol::Method> methods;
  protocol::ExperimentConfig experiment;
  fs::path out_dir;
  unsigned jobs = 1;
  bool log_executions = false;
};

ResolvedRun resolve(const RunConfig& cfg) {
  ResolvedRun r;
  const auto& names = bench::list_problems();
  const std::string problems = cfg.get("problems");
  if (problems == "all") {
    r.problems = names;
  } else {
    r.problems = split_list(problems);
    if (r.problems.empty()) throw ConfigError("problems", "no problem names given");
    for (const auto& p : r.problems)
      if (std::find(names.begin(), names.end(), p) == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw ConfigError("problems", "unknown problem '" + p + "'; valid names: " + valid);
      }
  }
  try {
    for (const auto& m : split_list(cfg.get("methods"))) r.methods.push_back(protocol::parse_method(m));
  } catch (const Error& e) {
    throw ConfigError("methods", e.what());
  }
  if (r.methods.empty()) throw ConfigError("methods", "no methods given");

  auto& ex = r.experiment;
  ex.budget = parse_u64("budget", cfg.get("budget"));
  if (ex.budget < 100) throw ConfigError("budget", "must be at least 100");
  ex.trials = parse_u64("trials", cfg.get("trials"));
  if (ex.trials < 1) throw ConfigError("trials", "must be at least 1");
  ex.master_seed = parse_u64("master_seed", cfg.get("master_seed"));
  if (cfg.get("checkpoints") != "default") {
    for (const auto& c : split_list(cfg.get("checkpoints"))) {
      const auto v = parse_u64("checkpoints", c);
      if (v == 0 || v > ex.budget) throw ConfigError("checkpoints", "each checkpoint must lie in [1, budget]");
      ex.checkpoints.push_back(v);
    }
  }
  if (cfg.get("noise_amplitude") != "default") {
    const double a = parse_real("noise_amplitude", cfg.get("noise_amplitude"));
    if (!(a >= 0)) throw ConfigError("noise_amplitude", "must be non-negative");
    ex.noise_scale = a;
  }
  ex.validation_m = parse_u64("validation_m", cfg.get("validation_m"));
  if (ex.validation_m < 1) throw ConfigError("validation_m", "must be at least 1");
  for (auto m : r.methods) {
    if ((m == protocol::Method::BF || m == protocol::Method::SA) && ex.budget < ex.k)
      throw ConfigError("budget", "must be at least k = 30");
    if (m == protocol::Method::Ens && ex.budget < ex.ens.bootstrap)
      throw ConfigError("budget", "Ens needs at least 200 executions");
  }
  r.out_dir = cfg.get("out_dir");
  r.jobs = static_cast<unsigned>(parse_u64("jobs", cfg.get("jobs")));
  if (r.jobs == 0) r.jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::string log = cfg.get("log_executions");
  if (log != "true" && log != "false") throw ConfigError("log_executions", "expected true or false");
  r.log_executions = log == "true";
  return r;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.close();
  if (!f) throw Error("failed writing " + path.string());
}

int cmd_run(RunConfig cfg, const std::string& config_file, const std::map<std::string, std::string>& flags) {
  // Precedence: built-in defaults < profile < config file < flags.
  for (const auto& [k, v] : std::map<std::string, std::string>{{"problems", "all"},
                                                                {"methods", "bf,sa,ga,ens"},
                                                                {"master_seed", "0"},
                                                                {"checkpoints", "default"},
                                                                {"noise_amplitude", "default"},
                                                                {"validation_m", "1000"},
                                                                {"jobs", "1"},
                                                                {"log_executions", "false"}})
    cfg.set(k, v, "default");
  const char* env_out = std::getenv("BUGAMP_OUT");
  if (env_out && *env_out)
    cfg.set("out_dir", env_out, "env:BUGAMP_OUT");
  else
    cfg.set("out_dir", "bugamp_out", "default");

  std::map<std::string, std::string> file;
  if (!config_file.empty()) file = read_config_file(config_file);
  auto pick_profile = [&](const std::map<std::string, std::string>& src, const std::string& name) {
    if (auto it = src.find("profile"); it != src.end()) apply_profile(cfg, it->second, name);
  };
  apply_profile(cfg, "desk", "default");
  pick_profile(file, "file");
  pick_profile(flags, "flag");
  for (const auto& [k, v] : file)
    if (k != "profile") cfg.set(k, v, "file");
  for (const auto& [k, v] : flags)
    if (k != "profile") cfg.set(k, v, "flag");

  const ResolvedRun run = resolve(cfg);
  std::error_code ec;
  fs::create_directories(run.out_dir, ec);
  if (ec) throw Error("cannot create " + run.out_dir.string() + ": " + ec.message());

  nlohmann::ordered_json eff;
  for (const auto& field : RunConfig::kFields)
    eff[field] = {{"value", cfg.get(field)}, {"source", cfg.values.at(field).second}};
  nlohmann::ordered_json cps = nlohmann::ordered_json::array();
  for (auto c : run.experiment.effective_checkpoints()) cps.push_back(c);
  eff["effective_checkpoints"] = cps;
  write_file(run.out_dir / "config_effective.json", eff.dump(2) + "\n");

  {
    std::ostringstream seeds;
    seeds << "problem,method,trial,trial_seed,validation_seed\n";
    for (const auto& p : run.problems)
      for (auto m : run.methods)
        for (std::uint64_t t = 0; t < run.experiment.trials; ++t)
          seeds << p << ',' << protocol::to_string(m) << ',' << t << ','
                << protocol::trial_seed(run.experiment.master_seed, p, m, t) << ','
                << protocol::validation_seed(run.experiment.master_seed, p) << '\n';
    write_file(run.out_dir / "seeds.csv", seeds.str());
  }

  auto experiment = run.experiment;
  experiment.keep_executions = run.log_executions;
  std::ofstream exec_log;
  if (run.log_executions) exec_log.open(run.out_dir / "executions.csv", std::ios::binary);
  bool header = true;
  const auto records = protocol::run_campaign(
      run.problems, run.methods, experiment, run.jobs,
      [&](const protocol::TrialKey& key, const protocol::TrialResult& r) {
        if (run.log_executions) {
          protocol::write_execution_log(exec_log, key.method, key.problem, key.trial, r.executions, header);
          header = false;
        }
      });
  if (run.log_executions) {
    exec_log.close();
    if (!exec_log) throw Error("failed writing " + (run.out_dir / "executions.csv").string());
  }

  {
    std::ofstream f(run.out_dir / "records.csv", std::ios::binary);
    protocol::write_records_csv(f, records);
    f.close();
    if (!f) throw Error("failed writing " + (run.out_dir / "records.csv").string());
  }
  stats::emit_reports(records, run.out_dir);

  for (const auto& p : run.problems) {
    std::printf("%-20s", p.c_str());
    for (auto m : run.methods) {
      std::vector<double> best;
      std::uint64_t last = 0;
      for (const auto& r : records)
        if (r.problem == p && r.method == m) last = std::max(last, r.checkpoint);
      for (const auto& r : records)
        if (r.problem == p && r.method == m && r.checkpoint == last) best.push_back(r.best_score);
      std::printf("  %s=%.4f", protocol::to_string(m).c_str(), stats::aggregate(best).mean);
    }
    std::printf("\n");
  }
  std::printf("wrote %s\n", (run.out_dir / "records.csv").string().c_str());
  return 0;
}

int cmd_describe(const std::string& name, bool json) {
  const ProblemSpec p = bench::build_problem(name);
  const auto m = bench::manifest(p);
  if (json) {
    std::cout << m.dump(2) << '\n';
    return 0;
  }
  std::cout << "name:        " << p.name << '\n' << "dim:         " << p.dim() << '\n' << "parameters: ";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    std::cout << ' ' << p.param_names[i] << "[" << protocol::format_number(p.bounds.lo[static_cast<Eigen::Index>(i)])
              << ',' << protocol::format_number(p.bounds.hi[static_cast<Eigen::Index>(i)]) << ']';
  }
  std::cout << "\neffect:     ";
  for (auto e : p.taxonomy.effects) std::cout << ' ' << to_string(e);
  std::cout << "\nroot cause:  " << to_string(p.taxonomy.root_cause) << '\n';
  auto vec = [](const ParamVector& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + protocol::format_number(v[i]);
    return s;
  };
  std::cout << "bug witness: " << vec(p.bug_witness) << '\n'
            << "pass witness:" << ' ' << vec(p.pass_witness) << '\n'
            << "noise:       " << protocol::format_number(p.noise_scale) << " * C\n"
            << "insight:     " << p.insight << '\n';
  return 0;
}

int cmd_trace(const std::string& name, const std::string& params, std::uint64_t seed, const std::string& noise,
              bool csv) {
  const ProblemSpec p = bench::build_problem(name);
  ParamVector x;
  if (params == "bug" || params == "pass") {
    x = params == "bug" ? p.bug_witness : p.pass_witness;
  } else {
    const auto parts = split_list(params);
    x.resize(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) x[static_cast<Eigen::Index>(i)] = parse_real("params", parts[i]);
  }
  std::vector<TraceEntry> trace;
  SimulationOptions opts;
  opts.trace = &trace;
  if (!noise.empty()) opts.noise_scale = parse_real("noise", noise);
  const TrialOutcome o = simulate_trial(p, x, seed, opts);
  if (csv) {
    write_trace_csv(std::cout, trace);
  } else {
    for (const auto& e : trace)
      std::printf("%6llu  t=%-12s T%zu  %-10s %s\n", static_cast<unsigned long long>(e.step_index),
                  protocol::format_number(e.virtual_time).c_str(), e.thread_index, e.event_kind.c_str(),
                  e.detail.c_str());
  }
  (csv ? std::cerr : std::cout) << "outcome: " << describe(o) << '\n';
  return 0;
}

int cmd_report(const std::string& records_path, const std::string& out) {
  std::ifstream f(records_path);
  if (!f) throw Error("cannot read " + records_path);
  const auto records = protocol::read_records_csv(f);
  stats::emit_reports(records, out);
  std::printf("wrote reports for %zu records to %s\n", records.size(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-parameter search for latent concurrency bugs"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the method comparison and write records and reports");
  std::string config_file;
  std::map<std::string, std::string> flags;
  std::string profile, problems, methods, budget, trials, seed, checkpoints, noise, validation_m, out, jobs;
  bool log_exec = false;
  run->add_option("--config", config_file, "key = value or JSON config file");
  run->add_option("--profile", profile, "desk (B=1300, 10 trials) or full (B=3900, 50 trials)");
  run->add_option("--problems", problems, "Comma-separated names or 'all'");
  run->add_option("--methods", methods, "Comma-separated subset of bf,sa,ga,ens");
  run->add_option("--budget", budget, "Executions per trial");
  run->add_option("--trials", trials, "Independent trials per (method, problem)");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--checkpoints", checkpoints, "Comma-separated checkpoints (default: 100, 300, ..., budget)");
  run->add_option("--noise", noise, "Noise amplitude as a fraction of C (default: per problem)");
  run->add_option("--validation-m", validation_m, "Trials per final-validation estimate");
  run->add_option("--out", out, "Output directory (default: $BUGAMP_OUT or ./bugamp_out)");
  run->add_option("--jobs", jobs, "Worker threads (0: all cores)");
  run->add_flag("--log-executions", log_exec, "Write every execution to executions.csv");

  auto* desc = app.add_subcommand("describe", "Print a problem's parameters, taxonomy and witnesses");
  std::string desc_name;
  bool desc_json = false;
  desc->add_option("problem", desc_name, "Problem name")->required();
  desc->add_flag("--json", desc_json, "Print the JSON manifest");

  auto* trace = app.add_subcommand("trace", "Replay one execution and print its event trace");
  std::string trace_name, trace_params = "bug", trace_noise;
  std::uint64_t trace_seed = 0;
  bool trace_csv = false;
  trace->add_option("problem", trace_name, "Problem name")->required();
  trace->add_option("--params", trace_params, "Comma-separated vector, or 'bug' / 'pass' for the witnesses");
  trace->add_option("--seed", trace_seed, "Noise seed");
  trace->add_option("--noise", trace_noise, "Noise amplitude override (0 for a noise-free run)");
  trace->add_flag("--csv", trace_csv, "Emit the trace as CSV");

  auto* report = app.add_subcommand("report", "Re-emit reports from an existing records file");
  std::string report_records, report_out;
  report->add_option("records", report_records, "records.csv path")->required();
  report->add_option("--out", report_out, "Output directory (default: the records file's directory)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const std::pair<const char*, std::string*> opts[] = {
          {"profile", &profile},         {"problems", &problems}, {"methods", &methods},
          {"budget", &budget},           {"trials", &trials},     {"master_seed", &seed},
          {"checkpoints", &checkpoints}, {"noise_amplitude", &noise}, {"validation_m", &validation_m},
          {"out_dir", &out},             {"jobs", &jobs}};
      for (const auto& [field, value] : opts)
        if (!value->empty()) flags[field] = *value;
      if (log_exec) flags["log_executions"] = "true";
      return cmd_run(RunConfig{}, config_file, flags);
    }
    if (*desc) return cmd_describe(desc_name, desc_json);
    if (*trace) return cmd_trace(trace_name, trace_params, trace_seed, trace_noise, trace_csv);
    if (*report) {
      if (report_out.empty()) report_out = fs::path(report_records).parent_path().string();
      if (report_out.empty()) report_out = ".";
      return cmd_report(report_records, report_out);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const bench::UnknownProblem& e) {
    std::string valid;
    for (const auto& n : bench::list_problems()) valid += (valid.empty() ? "" : ", ") + n;
    std::fprintf(stderr, "error: %s; valid names: %s\n", e.what(), valid.c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
