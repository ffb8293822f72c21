// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include "bugamp/bench/registry.hpp"
#include "bugamp/learn/dataset.hpp"
#include "bugamp/learn/learners.hpp"
#include "bugamp/protocol/experiment.hpp"
#include "bugamp/search/classic.hpp"
#include "bugamp/sim/simulate.hpp"
#include "bugamp/stats/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

using namespace bugamp;
using protocol::ExperimentRecord;
using protocol::Method;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  int id;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

std::vector<Verdict> g_results;

void report(int id, const std::string& title, bool pass, const std::string& detail, double secs) {
  g_results.push_back({id, title, pass, detail, secs});
  std::printf("%s  [%2d] %-24s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, NoiseSource& rng) {
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = rng.uniform();
  return X;
}

Eigen::VectorXi random_labels(Eigen::Index n, NoiseSource& rng) {
  Eigen::VectorXi y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = rng.uniform() < 0.4;
  y[0] = 0;
  y[1] = 1;
  return y;
}

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

// ------------------------------------------------------------- shared runs

struct Run {
  std::vector<ExperimentRecord> records;
  // top-list size of each record's snapshot, aligned with `records`
  std::vector<std::size_t> top_sizes;
  std::map<std::pair<std::string, Method>, double> pair_seconds;
  std::vector<std::pair<std::string, search::SearchResult>> searches;
  std::vector<std::size_t> execution_counts;
  double seconds = 0;
};

Run campaign(const std::vector<std::string>& problems, const std::vector<Method>& methods,
             const protocol::ExperimentConfig& cfg, unsigned jobs) {
  Run run;
  const auto t0 = Clock::now();
  auto last = Clock::now();
  run.records = protocol::run_campaign(problems, methods, cfg, jobs, [&](const protocol::TrialKey& k,
                                                                         const protocol::TrialResult& r) {
    // With one job this is the trial's own time; with more it is the wait
    // for the next result in order.
    const auto now = Clock::now();
    run.pair_seconds[{k.problem, k.method}] += std::chrono::duration<double>(now - last).count();
    last = now;
    for (const auto& s : r.search.snapshots) run.top_sizes.push_back(s.top.size());
    if (cfg.keep_executions) {
      run.searches.emplace_back(k.problem + "/" + protocol::to_string(k.method), r.search);
      run.execution_counts.push_back(r.executions.size());
    }
  });
  run.seconds = seconds_since(t0);
  return run;
}

// --------------------------------------------------------------- criteria

void criterion1(unsigned jobs, const Run& desk) {
  const auto t0 = Clock::now();
  const auto dir = std::filesystem::temp_directory_path() / "bugamp_acceptance_c1";
  std::filesystem::remove_all(dir);
  bool identical = true, ok = true;
  double slowest = 0;
  std::string slowest_method;
  for (Method m : protocol::kAllMethods) {
    std::string bytes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / (protocol::method_key(m) + std::to_string(rep));
      const std::string cmd = std::string(BUGAMP_CLI) + " run --profile desk --problems DelayedWrite --methods " +
                              protocol::method_key(m) + " --jobs " + std::to_string(jobs) + " --out " +
                              out.string() + " > /dev/null 2>&1";
      const auto r0 = Clock::now();
      if (std::system(cmd.c_str()) != 0) ok = false;
      const double secs = seconds_since(r0);
      if (rep == 0 && secs > slowest) {
        slowest = secs;
        slowest_method = protocol::to_string(m);
      }
      bytes[rep] = slurp(out / "records.csv");
    }
    identical = identical && !bytes[0].empty() && bytes[0] == bytes[1];
  }
  std::filesystem::remove_all(dir);

  // The campaign gives every other pair's time for reference.
  std::string worst;
  double worst_secs = 0;
  for (const auto& [key, secs] : desk.pair_seconds)
    if (secs > worst_secs) {
      worst_secs = secs;
      worst = key.first + "/" + protocol::to_string(key.second);
    }
  const bool pass = ok && identical && slowest < 60.0;
  report(1, "determinism+runtime", pass,
         fmt("records byte-identical for 4 methods: %s; slowest desk run DelayedWrite/%s %.1fs (limit 60s, %u "
             "job(s)); campaign max pair %s %.1fs",
             identical ? "yes" : "NO", slowest_method.c_str(), slowest, jobs, worst.c_str(), worst_secs),
         seconds_since(t0));
}

void criterion2(const Run& full) {
  const auto t0 = Clock::now();
  std::size_t checked = 0, bad = 0;
  std::string first_bad;
  auto audit = [&](const std::string& label, const search::SearchResult& r, std::size_t executions, bool is_bf,
                   bool is_ga) {
    ++checked;
    bool good = r.spent == executions && r.spent <= 3900;
    if (!(is_ga && r.early_stopped)) good = good && r.spent >= 3871;
    if (is_bf) good = good && r.spent == 3900 && r.ranking.size() == 130;
    for (const auto& s : r.snapshots) good = good && s.spent <= s.checkpoint;
    if (!good) {
      ++bad;
      if (first_bad.empty())
        first_bad = fmt(" first: %s spent=%llu execs=%zu ranking=%zu", label.c_str(),
                        static_cast<unsigned long long>(r.spent), executions, r.ranking.size());
    }
  };
  std::size_t ga_early = 0;
  for (const auto& name : bench::list_problems()) {
    const auto p = bench::build_problem(name);
    for (Method m : {Method::BF, Method::SA, Method::GA}) {
      search::RunOptions o;
      o.budget = 3900;
      o.seed = protocol::trial_seed(0, name, m, 0);
      o.checkpoints = protocol::checkpoint_schedule(3900);
      std::size_t executions = 0;
      o.on_execution = [&](const search::Execution&) { ++executions; };
      protocol::ExperimentConfig cfg;
      const auto r = protocol::run_method(p, m, o, cfg);
      ga_early += m == Method::GA && r.early_stopped;
      audit(name + "/" + protocol::to_string(m), r, executions, m == Method::BF, m == Method::GA);
    }
  }
  for (std::size_t i = 0; i < full.searches.size(); ++i) {
    const auto& [label, r] = full.searches[i];
    audit(label, r, full.execution_counts[i], label.ends_with("/BF"), label.ends_with("/GA"));
  }
  report(2, "budget exactness", bad == 0,
         fmt("%zu/%zu runs at B=3900 within [3871, 3900] and matching their execution log; BF 3900 spent and 130 "
             "candidates; GA early stops %zu%s",
             checked - bad, checked, ga_early, first_bad.c_str()),
         seconds_since(t0));
}

void criterion3() {
  const auto t0 = Clock::now();
  struct Fx {
    const char* problem;
    const char* file;
    std::vector<double> params;
    BugKind bug;
  };
  const std::vector<Fx> fixtures = {
      {"LockOrderInversion", "lock_order_inversion.trace.csv", {1, 0.25, 0.5, 0.25, 0.5}, BugKind::Deadlock},
      {"DelayedWrite", "delayed_write.trace.csv", {1, 0.0625, 0.25, 0.5, 0.75}, BugKind::Assertion},
      {"RaceToWait", "race_to_wait.trace.csv", {1, 0.0625, 0.25, 0.5, 0.0625, 0.25, 0.5}, BugKind::Deadlock},
  };
  int matched = 0;
  std::string misses;
  for (const auto& fx : fixtures) {
    const auto p = bench::build_problem(fx.problem);
    ParamVector x(static_cast<Eigen::Index>(fx.params.size()));
    for (std::size_t i = 0; i < fx.params.size(); ++i) x[static_cast<Eigen::Index>(i)] = fx.params[i];
    std::vector<TraceEntry> trace;
    SimulationOptions o;
    o.noise_scale = 0.0;
    o.trace = &trace;
    const auto out = simulate_trial(p, x, 1, o);
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    const std::string expected = slurp(std::string(BUGAMP_FIXTURE_DIR) + "/" + fx.file);
    if (out.kind == OutcomeKind::BugTriggered && out.bug == fx.bug && !expected.empty() && csv.str() == expected)
      ++matched;
    else
      misses += std::string(" ") + fx.problem;
  }
  report(3, "scheduler oracle", matched == 3, fmt("%d/3 hand-traced fixtures match outcome and trace%s", matched,
                                                   misses.c_str()),
         seconds_since(t0));
}

void criterion4() {
  const auto t0 = Clock::now();
  int ok = 0, total = 0;
  std::string misses;
  for (const auto& name : bench::list_problems()) {
    const auto p = bench::build_problem(name);
    SimulationOptions o;
    o.noise_scale = 0.0;
    const auto bug = simulate_trial(p, p.bug_witness, 1, o);
    const auto pass = simulate_trial(p, p.pass_witness, 1, o);
    total += 2;
    if (bug.kind == OutcomeKind::BugTriggered && p.is_failure(bug)) ++ok; else misses += " " + name + ":bug";
    if (pass.kind == OutcomeKind::Pass) ++ok; else misses += " " + name + ":pass";
  }
  report(4, "witness coverage", ok == 34 && total == 34, fmt("%d/%d witness assertions hold%s", ok, total,
                                                              misses.c_str()),
         seconds_since(t0));
}

void criterion5() {
  const auto t0 = Clock::now();
  std::set<std::pair<Effect, RootCause>> cells;
  std::set<std::string> dual;
  for (const auto& name : bench::list_problems()) {
    const auto tag = bench::classify(name);
    for (Effect e : tag.effects) cells.insert({e, tag.root_cause});
    if (tag.effects.size() == 2) dual.insert(name);
  }
  const std::set<std::string> want = {"RacyIncrement", "SharedCounter", "DelayedWrite", "IfNotWhile"};
  const bool pass = cells.size() == 12 && dual == want;
  std::string duals;
  for (const auto& d : dual) duals += " " + d;
  report(5, "taxonomy coverage", pass, fmt("%zu/12 cells covered; dual-effect:%s", cells.size(), duals.c_str()),
         seconds_since(t0));
}

void criterion6() {
  const auto t0 = Clock::now();
  NoiseSource rng(6);
  double worst = 0;
  int cases = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    for (int rep = 0; rep < 50; ++rep) {
      stats::SignedRanks r;
      // Values on a coarse grid give tied ranks.
      std::vector<double> x, y;
      while (x.size() < n) {
        const double d = static_cast<double>(static_cast<int>(rng.below(9)) - 4);
        if (d == 0) continue;
        x.push_back(d);
        y.push_back(0);
      }
      r = stats::signed_ranks(x, y);
      std::size_t hits = 0;
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double w = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (mask >> i & 1) w += r.ranks[i];
        hits += w >= r.w_plus - 1e-9;
      }
      const double brute = static_cast<double>(hits) / static_cast<double>(std::size_t{1} << n);
      worst = std::max(worst, std::abs(stats::wilcoxon_exact(r) - brute));
      ++cases;
    }
  }
  const double p5 = stats::wilcoxon_one_sided({1, 2, 3, 4, 5}, {0, 0, 0, 0, 0});
  report(6, "wilcoxon exactness", worst <= 1e-12 && p5 == 0.03125,
         fmt("%d cases n<=10, max |exact - enumeration| = %.3g (tol 1e-12); n=5 all positive p = %.17g", cases, worst,
             p5),
         seconds_since(t0));
}

void criterion7() {
  const auto t0 = Clock::now();
  using namespace learn;
  NoiseSource rng(7);
  double lr_worst = 0, mlp_worst = 0;
  const double h = 1e-6;
  for (int inst = 0; inst < 10; ++inst) {
    const auto dim = static_cast<Eigen::Index>(1 + rng.below(7));
    const auto n = static_cast<Eigen::Index>(8 + rng.below(40));
    const Eigen::MatrixXd X = random_matrix(n, dim, rng) * 4 - Eigen::MatrixXd::Constant(n, dim, 2);
    const Eigen::VectorXi y = random_labels(n, rng);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = 0.2 + rng.uniform();

    Eigen::VectorXd theta(dim + 1), g, fd(dim + 1);
    for (Eigen::Index j = 0; j <= dim; ++j) theta[j] = rng.gaussian();
    LogisticRegression::loss(theta, X, y, w, 0.01, &g);
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[j] += h;
      tm[j] -= h;
      fd[j] = (LogisticRegression::loss(tp, X, y, w, 0.01, nullptr) -
               LogisticRegression::loss(tm, X, y, w, 0.01, nullptr)) / (2 * h);
    }
    lr_worst = std::max(lr_worst, relative_error(g, fd));

    const std::vector<int> sizes = {static_cast<int>(dim), 50, 20, 1};
    Eigen::VectorXd mt(static_cast<Eigen::Index>(MLP::parameter_count(sizes)));
    for (Eigen::Index j = 0; j < mt.size(); ++j) mt[j] = 0.3 * rng.gaussian();
    Eigen::VectorXd mg, mfd(mt.size());
    MLP::loss(mt, sizes, X, y, w, 0.01, &mg);
    for (Eigen::Index j = 0; j < mt.size(); ++j) {
      Eigen::VectorXd tp = mt, tm = mt;
      tp[j] += h;
      tm[j] -= h;
      mfd[j] = (MLP::loss(tp, sizes, X, y, w, 0.01, nullptr) - MLP::loss(tm, sizes, X, y, w, 0.01, nullptr)) / (2 * h);
    }
    mlp_worst = std::max(mlp_worst, relative_error(mg, mfd));
  }

  int gini_ok = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const auto n = static_cast<Eigen::Index>(6 + rng.below(20));
    const auto dim = static_cast<Eigen::Index>(1 + rng.below(4));
    Eigen::MatrixXd X(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) X(i, j) = static_cast<double>(rng.below(6)) / 5.0;
    const Eigen::VectorXi y = random_labels(n, rng);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = 0.5 + rng.uniform();
    // Brute force over every feature and midpoint.
    double best = 2.0;
    int bf = -1;
    double bt = 0;
    for (Eigen::Index f = 0; f < dim; ++f) {
      std::set<double> vals;
      for (Eigen::Index i = 0; i < n; ++i) vals.insert(X(i, f));
      std::vector<double> v(vals.begin(), vals.end());
      for (std::size_t t = 0; t + 1 < v.size(); ++t) {
        const double thr = 0.5 * (v[t] + v[t + 1]);
        double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
        for (Eigen::Index i = 0; i < n; ++i) (X(i, f) <= thr ? (y[i] ? l1 : l0) : (y[i] ? r1 : r0)) += w[i];
        const double imp = ((l0 + l1) * gini(l0, l1) + (r0 + r1) * gini(r0, r1)) / (l0 + l1 + r0 + r1);
        if (imp < best - 1e-12) {
          best = imp;
          bf = static_cast<int>(f);
          bt = thr;
        }
      }
    }
    NoiseSource tree_rng(static_cast<std::uint64_t>(inst));
    const auto tree = DecisionTree::fit(X, y, w, {}, tree_rng);
    const auto& root = tree->nodes()[0];
    if (bf < 0 ? root.feature < 0 : (root.feature == bf && root.threshold == bt)) ++gini_ok;
  }

  int smote_ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    NoiseSource srng(1000 + seed);
    LabeledDataset d;
    d.X = random_matrix(40, 4, srng);
    d.y = Eigen::VectorXi::Zero(40);
    const int pos = 2 + static_cast<int>(srng.below(12));
    for (int i = 0; i < pos; ++i) d.y[static_cast<Eigen::Index>(srng.below(40))] = 1;
    const auto out = smote_oversample(d, {}, srng);
    bool good = out.positives() == out.negatives() && out.X.topRows(40) == d.X;
    std::vector<Eigen::Index> minority;
    for (Eigen::Index i = 0; i < 40; ++i)
      if (d.y[i] == 1) minority.push_back(i);
    for (Eigen::Index s = 40; s < out.X.rows() && good; ++s) {
      const Eigen::RowVectorXd x = out.X.row(s);
      bool on_segment = out.y[s] == 1 && false;
      for (auto a : minority)
        for (auto b : minority) {
          const Eigen::RowVectorXd ab = d.X.row(b) - d.X.row(a);
          const double len2 = ab.squaredNorm();
          if (len2 == 0) continue;
          const double lambda = (x - d.X.row(a)).dot(ab) / len2;
          if (lambda < -1e-12 || lambda > 1 + 1e-12) continue;
          if ((d.X.row(a) + lambda * ab - x).norm() < 1e-9) on_segment = true;
        }
      good = good && out.y[s] == 1 && on_segment;
    }
    smote_ok += good;
  }
  const bool pass = lr_worst < 1e-4 && mlp_worst < 1e-4 && gini_ok == 20 && smote_ok == 20;
  report(7, "learner numerics", pass,
         fmt("grad rel err LR %.2g, MLP(50,20) %.2g (tol 1e-4, 10 instances); Gini root %d/20; SMOTE %d/20",
             lr_worst, mlp_worst, gini_ok, smote_ok),
         seconds_since(t0));
}

/// trial -> best score at the final checkpoint
std::map<std::string, std::map<Method, double>> final_means(const std::vector<ExperimentRecord>& recs) {
  std::map<std::tuple<std::string, Method, std::uint64_t>, std::pair<std::uint64_t, double>> last;
  for (const auto& r : recs) {
    auto& slot = last[{r.problem, r.method, r.trial}];
    if (r.checkpoint >= slot.first) slot = {r.checkpoint, r.best_score};
  }
  std::map<std::string, std::map<Method, std::vector<double>>> vals;
  for (const auto& [k, v] : last) vals[std::get<0>(k)][std::get<1>(k)].push_back(v.second);
  std::map<std::string, std::map<Method, double>> out;
  for (const auto& [p, ms] : vals)
    for (const auto& [m, v] : ms) out[p][m] = stats::aggregate(v).mean;
  return out;
}

void criterion8(const Run& desk) {
  const auto means = final_means(desk.records);
  int over_bf = 0, over_sa = 0;
  std::string table;
  for (const auto& [p, m] : means) {
    const double e = m.at(Method::Ens), b = m.at(Method::BF), s = m.at(Method::SA);
    over_bf += e > b;
    over_sa += e > s;
    std::printf("        %-20s Ens %.3f  BF %.3f  SA %.3f  GA %.3f\n", p.c_str(), e, b, s,
                m.count(Method::GA) ? m.at(Method::GA) : protocol::kAbsent);
  }
  std::fflush(stdout);
  report(8, "desk method ordering", over_bf >= 12 && over_sa >= 14,
         fmt("Ens > BF on %d/17 (need 12), Ens > SA on %d/17 (need 14); B=1300, 10 trials, seed 0", over_bf,
             over_sa),
         desk.seconds);
}

void criterion9(const std::vector<const Run*>& runs) {
  const auto t0 = Clock::now();
  std::size_t series = 0, violations = 0, checkpoints_full = 0;
  for (const Run* run : runs) {
    std::map<std::tuple<std::string, Method, std::uint64_t>, std::vector<const ExperimentRecord*>> by_trial;
    for (const auto& r : run->records) by_trial[{r.problem, r.method, r.trial}].push_back(&r);
    for (auto& [k, v] : by_trial) {
      ++series;
      std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->checkpoint < b->checkpoint; });
      checkpoints_full = std::max(checkpoints_full, v.size());
      for (std::size_t i = 1; i < v.size(); ++i) {
        const double pairs[3][2] = {{v[i - 1]->best_score, v[i]->best_score},
                                    {v[i - 1]->fifth_score, v[i]->fifth_score},
                                    {v[i - 1]->tenth_score, v[i]->tenth_score}};
        for (const auto& p : pairs)
          if (!protocol::is_absent(p[0]) && (protocol::is_absent(p[1]) || p[1] < p[0])) ++violations;
      }
    }
  }
  report(9, "best-so-far monotone", violations == 0 && checkpoints_full == 20,
         fmt("%zu trial series (up to %zu checkpoints), %zu decreases in best/5th/10th", series, checkpoints_full,
             violations),
         seconds_since(t0));
}

void criterion10(const std::vector<const Run*>& runs) {
  const auto t0 = Clock::now();
  std::size_t records = 0, mismatches = 0, absent_tenth = 0, bf100 = 0;
  for (const Run* run : runs) {
    for (std::size_t i = 0; i < run->records.size(); ++i) {
      const auto& r = run->records[i];
      const std::size_t top = run->top_sizes[i];
      ++records;
      const bool ok = protocol::is_absent(r.best_score) == (top < 1) &&
                      protocol::is_absent(r.fifth_score) == (top < 5) &&
                      protocol::is_absent(r.tenth_score) == (top < 10);
      mismatches += !ok;
      absent_tenth += protocol::is_absent(r.tenth_score);
      if (r.method == Method::BF && r.checkpoint == 100) bf100 += protocol::is_absent(r.tenth_score) ? 1 : 0;
    }
  }
  report(10, "top-k absent marker", mismatches == 0 && bf100 > 0,
         fmt("%zu records, %zu disagree with ranking size; %zu absent 10th entries, BF 10th absent at 100 in %zu",
             records, mismatches, absent_tenth, bf100),
         seconds_since(t0));
}

void criterion11() {
  const auto t0 = Clock::now();
  double worst = 0;
  std::string worst_name, failing;
  for (const auto& name : bench::list_problems()) {
    const auto p = bench::build_problem(name);
    NoiseSource rng(derive_seed({0xacce55, std::hash<std::string>{}(name)}));
    int fails = 0;
    for (int i = 0; i < 10'000; ++i) {
      const ParamVector x = search::sample_uniform(p.bounds, rng);
      fails += p.is_failure(simulate_trial(p, x, rng.next_u64()));
    }
    const double rate = fails / 10'000.0;
    if (rate >= 0.2) failing += fmt(" %s=%.4f", name.c_str(), rate);
    if (rate > worst) {
      worst = rate;
      worst_name = name;
    }
  }
  report(11, "bug rarity", failing.empty(),
         fmt("max uniform failure rate %.4f (%s) over 10000 trials per problem (limit 0.2)%s", worst,
             worst_name.c_str(), failing.c_str()),
         seconds_since(t0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  unsigned jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0: all cores)");
  CLI11_PARSE(app, argc, argv);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::printf("acceptance: %u job(s)\n", jobs);
  std::fflush(stdout);

  const auto& problems = bench::list_problems();
  const std::vector<Method> all(protocol::kAllMethods.begin(), protocol::kAllMethods.end());

  protocol::ExperimentConfig desk_cfg;
  desk_cfg.budget = 1300;
  desk_cfg.trials = 10;
  desk_cfg.master_seed = 0;
  std::printf("desk campaign: %zu problems x 4 methods x 10 trials ...\n", problems.size());
  std::fflush(stdout);
  const Run desk = campaign(problems, all, desk_cfg, jobs);

  protocol::ExperimentConfig full_cfg;
  full_cfg.budget = 3900;
  full_cfg.trials = 2;
  full_cfg.validation_m = 200;
  full_cfg.keep_executions = true;
  std::printf("full-budget run: 2 problems x 4 methods x 2 trials ...\n");
  std::fflush(stdout);
  const Run full = campaign({"DelayedWrite", "SharedCounter"}, all, full_cfg, jobs);

  criterion1(jobs, desk);
  criterion2(full);
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8(desk);
  criterion9({&desk, &full});
  criterion10({&desk, &full});
  criterion11();

  const auto passed = std::count_if(g_results.begin(), g_results.end(), [](const Verdict& v) { return v.pass; });
  std::printf("acceptance: %zd/%zu criteria pass\n", passed, g_results.size());
  return passed == static_cast<std::ptrdiff_t>(g_results.size()) ? 0 : 1;
}
