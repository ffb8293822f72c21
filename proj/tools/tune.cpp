// Calibration helper: failure rates under uniform inputs and witness checks.
#include "bugamp/bench/registry.hpp"
#include "bugamp/learn/stacking.hpp"
#include "bugamp/protocol/experiment.hpp"
#include "bugamp/sim/simulate.hpp"

#include <chrono>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <vector>
#include <cstdlib>
#include <string>

using namespace bugamp;

namespace {

double rate_at(const ProblemSpec& p, const ParamVector& x, int n, std::uint64_t salt) {
  int f = 0;
  for (int i = 0; i < n; ++i) f += p.is_failure(simulate_trial(p, x, derive_seed({salt, std::uint64_t(i)})));
  return double(f) / n;
}

// Uniform rate, real brute-force score and a hill-climbed peak.
void landscape(const std::string& name) {
  const auto p = bench::build_problem(name);
  NoiseSource rng(99);
  int fails = 0;
  for (int i = 0; i < 4000; ++i) {
    ParamVector x(static_cast<Eigen::Index>(p.dim()));
    for (Eigen::Index d = 0; d < x.size(); ++d) x[d] = rng.uniform();
    fails += p.is_failure(simulate_trial(p, x, rng.next_u64()));
  }
  int hot = 0;
  for (int i = 0; i < 300; ++i) {
    ParamVector x(static_cast<Eigen::Index>(p.dim()));
    for (Eigen::Index d = 0; d < x.size(); ++d) x[d] = rng.uniform();
    hot += rate_at(p, x, 40, rng.next_u64()) > 0.5;
  }
  protocol::ExperimentConfig cfg;
  cfg.budget = 1300;
  cfg.validation_m = 300;
  cfg.checkpoints = {1300};
  double bf = 0;
  ParamVector best;
  double best_rate = -1;
  for (std::uint64_t t = 0; t < 6; ++t) {
    const auto r = protocol::run_trial(p, protocol::Method::BF, t, cfg).records.back();
    bf += r.best_score / 6;
    if (r.best_score > best_rate) {
      best_rate = r.best_score;
      best = r.best_params;
    }
  }
  for (int it = 0; it < 300; ++it) {
    ParamVector y = best;
    const double step = it < 150 ? 0.05 : 0.02;
    for (Eigen::Index d = 0; d < y.size(); ++d) y[d] += step * rng.gaussian();
    y = p.bounds.clamp(y);
    const double r = rate_at(p, y, 100, rng.next_u64());
    if (r > best_rate) {
      const double confirm = rate_at(p, y, 300, rng.next_u64());
      if (confirm > best_rate) {
        best = y;
        best_rate = confirm;
      }
    }
  }
  std::printf("%-20s rate=%.4f hot=%.3f BF=%.3f peak=%.3f at", name.c_str(), fails / 4000.0, hot / 300.0, bf,
              best_rate);
  for (Eigen::Index d = 0; d < best.size(); ++d) std::printf(" %.2f", best[d]);
  std::printf("\n");
  std::fflush(stdout);
}

// Desk-profile style comparison: mean validated best per method.
void compare(const std::string& name, int trials, std::uint64_t budget, const std::string& methods) {
  const auto p = bench::build_problem(name);
  protocol::ExperimentConfig cfg;
  cfg.budget = budget;
  cfg.trials = static_cast<std::uint64_t>(trials);
  cfg.master_seed = 2024;
  cfg.checkpoints = {budget};
  std::printf("%-20s", name.c_str());
  for (char c : methods) {
    const protocol::Method m = c == 'b' ? protocol::Method::BF : c == 's' ? protocol::Method::SA
                             : c == 'g' ? protocol::Method::GA : protocol::Method::Ens;
    const auto t0 = std::chrono::steady_clock::now();
    double sum = 0;
    for (int t = 0; t < trials; ++t) sum += protocol::run_trial(p, m, static_cast<std::uint64_t>(t), cfg).records.back().best_score;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("  %s=%.3f (%.1fs)", protocol::to_string(m).c_str(), sum / trials, secs);
    std::fflush(stdout);
  }
  std::printf("\n");
}

// Zero-noise witnesses: a robust failing point and a clean passing point,
// rounded to two decimals and rechecked after rounding.
void witnesses(const std::string& name) {
  const auto p = bench::build_problem(name);
  SimulationOptions quiet;
  quiet.noise_scale = 0.0;
  NoiseSource rng(derive_seed({0x3u, name.size()}));
  auto round2 = [&](ParamVector x) {
    for (Eigen::Index d = 0; d < x.size(); ++d) x[d] = std::max(0.01, std::round(x[d] * 100) / 100);
    return p.bounds.clamp(x);
  };
  ParamVector bug, pass;
  double bug_rate = -1, pass_rate = 2;
  for (int i = 0; i < 200000 && (bug_rate < 0.95 || pass_rate > 0); ++i) {
    ParamVector x(static_cast<Eigen::Index>(p.dim()));
    for (Eigen::Index d = 0; d < x.size(); ++d) x[d] = rng.uniform();
    x = round2(x);
    const auto z = simulate_trial(p, x, 0, quiet);
    if (p.is_failure(z)) {
      if (bug_rate >= 0.95) continue;
      const double r = rate_at(p, x, 40, rng.next_u64());
      if (r > bug_rate) bug = x, bug_rate = r;
    } else if (z.kind == OutcomeKind::Pass && pass_rate > 0 && i % 7 == 0) {
      const double r = rate_at(p, x, 40, rng.next_u64());
      if (r < pass_rate) pass = x, pass_rate = r;
    }
  }
  auto show = [](const ParamVector& v) {
    std::string out;
    for (Eigen::Index d = 0; d < v.size(); ++d) out += (d ? ", " : "") + std::to_string(v[d]).substr(0, 4);
    return out;
  };
  std::printf("%-20s bug={%s} (%.2f)  pass={%s} (%.2f)\n", name.c_str(), show(bug).c_str(), bug_rate,
              show(pass).c_str(), pass_rate);
  std::fflush(stdout);
}

// Time per base learner on a SMOTE-balanced 1300-row dataset.
void profile_learners(const std::string& name) {
  const auto p = bench::build_problem(name);
  NoiseSource rng(5);
  learn::LabeledDataset data;
  data.X.resize(0, static_cast<Eigen::Index>(p.dim()));
  for (int i = 0; i < 1300; ++i) {
    ParamVector x(static_cast<Eigen::Index>(p.dim()));
    for (Eigen::Index d = 0; d < x.size(); ++d) x[d] = rng.uniform();
    data.append(x, p.is_failure(simulate_trial(p, x, rng.next_u64())) ? 1 : 0);
  }
  const auto train = learn::smote_oversample(data, {}, rng);
  const Eigen::VectorXd w = learn::balanced_weights(train.y);
  for (double tol : {1e-8, 1e-6, 1e-5}) {
    learn::LogisticConfig lc;
    lc.tolerance = tol;
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = learn::LogisticRegression::fit(train.X, train.y, w, lc);
    const auto t1 = std::chrono::steady_clock::now();
    std::printf("  lr tol=%g fit=%.3fs acc-proxy=%.6f\n", tol, std::chrono::duration<double>(t1 - t0).count(),
                m->predict_proba(train.X).mean());
  }
  for (auto kind : learn::kDefaultBaseKinds) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = learn::fit_base(kind, train, w, 7);
    const auto t1 = std::chrono::steady_clock::now();
    Eigen::MatrixXd pool = Eigen::MatrixXd::Random(10000, static_cast<Eigen::Index>(p.dim()));
    m->predict_proba(pool);
    const auto t2 = std::chrono::steady_clock::now();
    if (kind == learn::LearnerKind::MLP)
      std::printf("  mlp epochs=%d\n", static_cast<const learn::MLP&>(*m).epochs_run());
    std::printf("kind %d rows=%zu fit=%.3fs predict=%.3fs\n", static_cast<int>(kind), train.size(),
                std::chrono::duration<double>(t1 - t0).count(), std::chrono::duration<double>(t2 - t1).count());
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::string(argv[1]) == "cmp") {
    // cmp TRIALS METHODS(b,s,g,e letters) [name]
    const int trials = argc > 2 ? std::atoi(argv[2]) : 10;
    const std::string methods = argc > 3 ? argv[3] : "bse";
    for (const auto& name : bench::list_problems())
      if (argc < 5 || name == argv[4]) compare(name, trials, 1300, methods);
    return 0;
  }
  if (argc > 1 && std::string(argv[1]) == "prof") {
    profile_learners(argc > 2 ? argv[2] : "SharedCounter");
    return 0;
  }
  if (argc > 1 && std::string(argv[1]) == "wit") {
    for (const auto& name : bench::list_problems())
      if (argc < 3 || name == argv[2]) witnesses(name);
    return 0;
  }
  if (argc > 1 && std::string(argv[1]) == "land") {
    for (const auto& name : bench::list_problems())
      if (argc < 3 || name == argv[2]) landscape(name);
    return 0;
  }
  const int trials = argc > 1 ? std::atoi(argv[1]) : 2000;
  const std::string only = argc > 2 ? argv[2] : "";
  for (const auto& name : bench::list_problems()) {
    if (!only.empty() && only != name) continue;
    const auto p = bench::build_problem(name);
    SimulationOptions quiet;
    quiet.noise_scale = 0.0;
    const auto bw = simulate_trial(p, p.bug_witness, 1, quiet);
    const auto pw = simulate_trial(p, p.pass_witness, 1, quiet);

    NoiseSource rng(derive_seed({0x7u, trials}));
    int fails = 0, horizon = 0, zero_bug = 0;
    int kinds[4] = {0, 0, 0, 0};
    std::vector<std::array<int, 8>> bin_n(p.dim()), bin_f(p.dim());
    double steps = 0;
    ParamVector found_bug, found_pass;
    for (int i = 0; i < trials; ++i) {
      ParamVector x(static_cast<Eigen::Index>(p.dim()));
      for (Eigen::Index d = 0; d < x.size(); ++d) x[d] = rng.uniform();
      const auto o = simulate_trial(p, x, rng.next_u64());
      fails += p.is_failure(o);
      kinds[static_cast<int>(o.bug)]++;
      for (std::size_t d = 0; d < p.dim(); ++d) {
        const int b = std::min(3, static_cast<int>(x[static_cast<Eigen::Index>(d)] * 4));
        bin_n[d][b]++;
        bin_f[d][b] += p.is_failure(o);
      }
      horizon += o.kind == OutcomeKind::HorizonExceeded;
      steps += static_cast<double>(o.steps);
      const auto z = simulate_trial(p, x, 0, quiet);
      if (p.is_failure(z)) {
        ++zero_bug;
        if (found_bug.size() == 0) found_bug = x;
      } else if (found_pass.size() == 0 && z.kind == OutcomeKind::Pass) {
        found_pass = x;
      }
    }
    std::printf("%-20s dim=%zu rate=%.4f zero-noise=%.4f horizon=%d steps=%.0f  witness bug=%s pass=%s\n",
                name.c_str(), p.dim(), double(fails) / trials, double(zero_bug) / trials, horizon, steps / trials,
                describe(bw).c_str(), describe(pw).c_str());
    if (argc > 2) {
      std::printf("  kinds: none=%d assert=%d invariant=%d deadlock=%d\n", kinds[0], kinds[1], kinds[2], kinds[3]);
      auto show = [](const char* tag, const ParamVector& v) {
        std::printf("  %s:", tag);
        for (Eigen::Index d = 0; d < v.size(); ++d) std::printf(" %.3f", v[d]);
        std::printf("\n");
      };
      for (std::size_t d = 0; d < p.dim(); ++d) {
        std::printf("  %-14s", p.param_names[d].c_str());
        for (int b = 0; b < 4; ++b) std::printf(" %.3f", bin_n[d][b] ? double(bin_f[d][b]) / bin_n[d][b] : 0.0);
        std::printf("\n");
      }
      if (found_bug.size()) show("zero-noise bug", found_bug);
      if (found_pass.size()) show("zero-noise pass", found_pass);
    }
  }
}
