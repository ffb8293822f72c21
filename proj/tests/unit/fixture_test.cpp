#include "bugamp/bench/registry.hpp"
#include "bugamp/sim/simulate.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace bugamp;

namespace {

struct Fixture {
  const char* problem;
  const char* file;
  std::vector<double> params;
  BugKind bug;
  std::uint64_t steps;
  double final_time;
};

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> f = {
      {"LockOrderInversion", "lock_order_inversion.trace.csv", {1, 0.25, 0.5, 0.25, 0.5}, BugKind::Deadlock, 26,
       15.25},
      {"DelayedWrite", "delayed_write.trace.csv", {1, 0.0625, 0.25, 0.5, 0.75}, BugKind::Assertion, 15, 1.375},
      {"RaceToWait", "race_to_wait.trace.csv", {1, 0.0625, 0.25, 0.5, 0.0625, 0.25, 0.5}, BugKind::Deadlock, 26,
       7.0},
  };
  return f;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  EXPECT_TRUE(f) << path;
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

class SchedulerOracle : public ::testing::TestWithParam<Fixture> {};

}  // namespace

TEST_P(SchedulerOracle, MatchesHandTrace) {
  const auto& fx = GetParam();
  const auto problem = bench::build_problem(fx.problem);
  ParamVector x(static_cast<Eigen::Index>(fx.params.size()));
  for (std::size_t i = 0; i < fx.params.size(); ++i) x[static_cast<Eigen::Index>(i)] = fx.params[i];

  std::vector<TraceEntry> trace;
  SimulationOptions opts;
  opts.noise_scale = 0.0;
  opts.trace = &trace;
  const auto out = simulate_trial(problem, x, 1, opts);
  EXPECT_EQ(out.kind, OutcomeKind::BugTriggered);
  EXPECT_EQ(out.bug, fx.bug);
  EXPECT_EQ(out.steps, fx.steps);
  EXPECT_DOUBLE_EQ(out.final_time, fx.final_time);

  std::ostringstream csv;
  write_trace_csv(csv, trace);
  EXPECT_EQ(csv.str(), slurp(std::string(BUGAMP_FIXTURE_DIR) + "/" + fx.file));

  // Zero noise: the seed must not matter.
  std::vector<TraceEntry> again;
  opts.trace = &again;
  EXPECT_EQ(simulate_trial(problem, x, 99, opts), out);
  EXPECT_EQ(again, trace);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, SchedulerOracle, ::testing::ValuesIn(fixtures()),
                         [](const auto& info) { return std::string(info.param.problem); });
