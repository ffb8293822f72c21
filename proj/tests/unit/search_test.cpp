#include "bugamp/bench/registry.hpp"
#include "bugamp/search/classic.hpp"
#include "bugamp/search/validation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace bugamp;
using namespace bugamp::search;

namespace {

ParamVector vec(std::initializer_list<double> v) {
  ParamVector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

ThreadTask idle(ThreadContext& ctx) { co_yield ctx.pause(1); }

// Fails whenever params[1] > 0.5, with no noise dependence.
ThreadTask threshold(ThreadContext& ctx) {
  co_yield ctx.pause(1);
  if (ctx.params()[1] > 0.5) ctx.fail("above threshold");
}

ProblemSpec toy(ThreadProgram body, std::size_t dim = 3) {
  ProblemSpec p;
  p.name = "toy";
  p.bounds = Bounds::unit(dim);
  p.threads = {std::move(body)};
  return p;
}

RunOptions opts(std::uint64_t budget, std::uint64_t seed = 7) {
  RunOptions o;
  o.budget = budget;
  o.seed = seed;
  return o;
}

bool sorted_desc(const std::vector<CandidateEvaluation>& r) {
  for (std::size_t i = 1; i < r.size(); ++i)
    if (r[i - 1].rank_key < r[i].rank_key) return false;
  return true;
}

}  // namespace

TEST(BudgetLedgerTest, DebitsAndRefuses) {
  BudgetLedger l(5);
  l.debit(3);
  EXPECT_EQ(l.spent(), 3u);
  EXPECT_EQ(l.remaining(), 2u);
  EXPECT_THROW(l.debit(3), BudgetExhausted);
  EXPECT_EQ(l.spent(), 3u);
  l.debit(2);
  EXPECT_FALSE(l.can_afford(1));
}

TEST(EstimateScore, CountsFailuresOverK) {
  const auto p = toy(threshold);
  Evaluator eval(p, opts(100));
  EXPECT_DOUBLE_EQ(eval.estimate_score(vec({1, 0.9, 0}), 30).score, 1.0);
  EXPECT_DOUBLE_EQ(eval.estimate_score(vec({1, 0.1, 0}), 30).score, 0.0);
  EXPECT_EQ(eval.spent(), 60u);
  EXPECT_THROW(eval.estimate_score(vec({1, 0.1, 0}), 41), BudgetExhausted);
  EXPECT_EQ(eval.spent(), 60u);
}

TEST(EstimateScore, MixedOutcomesGiveTheirFraction) {
  // Outcome depends on the per-execution seed: fail when the first noise draw is below 0.2.
  ProblemSpec p = toy([](ThreadContext& ctx) -> ThreadTask {
    const double d = ctx.pause(1).duration;  // C=1, D=0, noise 1: the draw itself
    co_yield event::Delay{d};
    if (d < 0.2) ctx.fail("low draw");
  });
  p.noise_scale = 1.0;
  Evaluator eval(p, opts(30));
  const auto c = eval.estimate_score(vec({1, 0, 0}), 30);
  std::uint64_t expected = 0;
  for (auto s : c.seeds_used) expected += NoiseSource(s).uniform() < 0.2;
  EXPECT_DOUBLE_EQ(c.score, static_cast<double>(expected) / 30.0);
  EXPECT_EQ(c.executions_spent, 30u);
  EXPECT_EQ(std::set<std::uint64_t>(c.seeds_used.begin(), c.seeds_used.end()).size(), 30u);
}

TEST(EstimateScore, BugWitnessScoresOneWithoutNoise) {
  for (const auto& name : bench::list_problems()) {
    const auto p = bench::build_problem(name);
    RunOptions o = opts(5);
    o.sim.noise_scale = 0.0;
    Evaluator eval(p, o);
    EXPECT_DOUBLE_EQ(eval.estimate_score(p.bug_witness, 5).score, 1.0) << name;
  }
}

TEST(BruteForce, FullBudgetGives130Candidates) {
  const auto p = bench::build_problem("DelayedWrite");
  const auto r = brute_force(p, opts(3900));
  EXPECT_EQ(r.ranking.size(), 130u);
  EXPECT_EQ(r.spent, 3900u);
  EXPECT_TRUE(sorted_desc(r.ranking));
}

TEST(BruteForce, FloorDivisionOfBudget) {
  const auto r = brute_force(toy(idle), opts(59));
  EXPECT_EQ(r.ranking.size(), 1u);
  EXPECT_EQ(r.spent, 30u);
}

TEST(BruteForce, AllZeroScoresKeepGenerationOrder) {
  std::vector<ParamVector> generated;
  RunOptions o = opts(300);
  o.on_execution = [&](const Execution& e) {
    if (e.index % 30 == 0) generated.push_back(e.params);
  };
  const auto r = brute_force(toy(idle), o);
  ASSERT_EQ(r.ranking.size(), generated.size());
  for (std::size_t i = 0; i < generated.size(); ++i) EXPECT_EQ(r.ranking[i].params, generated[i]);
}

TEST(BruteForce, EveryExecutionIsInBounds) {
  for (const auto& name : {"RacyIncrement", "BrokenPeterson"}) {
    const auto p = bench::build_problem(name);
    bool ok = true;
    RunOptions o = opts(600);
    o.on_execution = [&](const Execution& e) { ok &= p.bounds.contains(e.params); };
    brute_force(p, o);
    EXPECT_TRUE(ok) << name;
  }
}

TEST(SaUpdate, ReflectsAwayFromPassingMean) {
  const Bounds wide{Eigen::VectorXd::Constant(2, -10), Eigen::VectorXd::Constant(2, 10)};
  // N = (-1.8, -0.18), P = (1.4, 1.2), u = 0 -> (P - N) / 2 = (1.6, 0.69).
  const std::vector<ParamVector> pts = {vec({-1.8, -0.18}), vec({1.4, 1.2})};
  const auto next = sa_update(vec({0, 0}), pts, {false, true}, wide);
  ASSERT_TRUE(next);
  EXPECT_NEAR((*next)[0], 1.6, 1e-12);
  EXPECT_NEAR((*next)[1], 0.69, 1e-12);
  const auto clamped = sa_update(vec({0, 0}), pts, {false, true}, Bounds::unit(2));
  EXPECT_EQ(*clamped, vec({1.0, 0.69}));
}

TEST(SaUpdate, EmptyClassGivesNothing) {
  const std::vector<ParamVector> pts = {vec({0.1, 0.2}), vec({0.3, 0.4})};
  EXPECT_FALSE(sa_update(vec({0, 0}), pts, {false, false}, Bounds::unit(2)));
  EXPECT_FALSE(sa_update(vec({0, 0}), pts, {true, true}, Bounds::unit(2)));
}

TEST(SaNextPoint, FallbackStaysInsideBall) {
  for (auto body : {ThreadProgram(idle), ThreadProgram([](ThreadContext& c) -> ThreadTask {
         co_yield c.pause(1);
         c.fail("always");
       })}) {
    const auto p = toy(body);
    Evaluator eval(p, opts(300));
    NoiseSource rng(3);
    ParamVector u = vec({0.5, 0.5, 0.5});
    for (int i = 0; i < 10; ++i) {
      const auto step = sa_next_point(eval, u, 0.05, 30, rng);
      EXPECT_TRUE(step.fallback);
      EXPECT_EQ(step.next, step.points.front());
      EXPECT_LE((step.next - u).norm(), 0.05 + 1e-12);
      u = step.next;
    }
    EXPECT_EQ(eval.spent(), 300u);
  }
}

TEST(SaNextPoint, RefusesWhenBudgetShort) {
  const auto p = toy(idle);
  Evaluator eval(p, opts(20));
  NoiseSource rng(1);
  EXPECT_THROW(sa_next_point(eval, vec({0.5, 0.5, 0.5}), 0.1, 30, rng), BudgetExhausted);
  EXPECT_EQ(eval.spent(), 0u);
}

TEST(SampleInBall, WithinRadiusAndBounds) {
  NoiseSource rng(9);
  const ParamVector u = vec({0.02, 0.5, 0.98, 0.5});
  for (int i = 0; i < 2000; ++i) {
    const auto x = sample_in_ball(u, 0.1, Bounds::unit(4), rng);
    ASSERT_LE((x - u).norm(), 0.1 + 1e-12);
    ASSERT_TRUE(Bounds::unit(4).contains(x));
  }
}

TEST(SampleInBall, RadiusDistributionIsUniformInVolume) {
  // P(r <= eps/2) = 2^-dim for a uniform point in a dim-ball.
  NoiseSource rng(10);
  const Bounds wide{Eigen::VectorXd::Constant(3, -5), Eigen::VectorXd::Constant(3, 5)};
  int inner = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) inner += sample_in_ball(vec({0, 0, 0}), 1.0, wide, rng).norm() <= 0.5;
  EXPECT_NEAR(static_cast<double>(inner) / n, 0.125, 0.006);
}

TEST(SaEpsilon, GeometricFromStartToEnd) {
  EXPECT_DOUBLE_EQ(sa_epsilon(0, 130), 0.1);
  EXPECT_NEAR(sa_epsilon(129, 130), 0.01, 1e-9);
  for (std::uint64_t t = 1; t < 130; ++t) {
    EXPECT_LT(sa_epsilon(t, 130), sa_epsilon(t - 1, 130));
    EXPECT_NEAR(sa_epsilon(t, 130) / sa_epsilon(t - 1, 130), std::pow(0.1, 1.0 / 129), 1e-12);
  }
}

TEST(SaSearch, SpendsBudgetAndReplays) {
  const auto p = bench::build_problem("SharedFlag");
  const auto a = sa_search(p, opts(3900));
  const auto b = sa_search(p, opts(3900));
  EXPECT_EQ(a.spent, 3900u);
  EXPECT_EQ(a.ranking.size(), 130u);
  ASSERT_EQ(a.ranking.size(), b.ranking.size());
  for (std::size_t i = 0; i < a.ranking.size(); ++i) {
    EXPECT_EQ(a.ranking[i].params, b.ranking[i].params);
    EXPECT_EQ(a.ranking[i].score, b.ranking[i].score);
  }
  EXPECT_TRUE(sorted_desc(a.ranking));
}

TEST(Crossover, SwapsTheSlice) {
  const ParamVector a = ParamVector::Constant(6, 1), b = ParamVector::Constant(6, 2);
  const auto [ca, cb] = two_point_crossover(a, b, 2, 4);
  EXPECT_EQ(ca, vec({1, 1, 2, 2, 1, 1}));
  EXPECT_EQ(cb, vec({2, 2, 1, 1, 2, 2}));
  const auto [fa, fb] = two_point_crossover(a, b, 0, 6);
  EXPECT_EQ(fa, b);
  EXPECT_EQ(fb, a);
}

TEST(Crossover, NotAppliedCopiesParents) {
  NoiseSource rng(4);
  const ParamVector a = vec({0.1, 0.2, 0.3}), b = vec({0.4, 0.5, 0.6});
  const auto [ca, cb] = two_point_crossover(a, b, rng, 0.0);
  EXPECT_EQ(ca, a);
  EXPECT_EQ(cb, b);
}

TEST(Crossover, DimensionMismatchThrows) {
  NoiseSource rng(4);
  EXPECT_THROW(two_point_crossover(vec({1, 2}), vec({1, 2, 3}), rng), DimMismatch);
  EXPECT_THROW(two_point_crossover(vec({1, 2}), vec({1, 2, 3}), 0, 1), DimMismatch);
}

TEST(Crossover, CutPairsAreUniform) {
  NoiseSource rng(5);
  const ParamVector a = ParamVector::Zero(4), b = ParamVector::Ones(4);
  std::map<std::pair<int, int>, int> counts;
  for (int i = 0; i < 20000; ++i) {
    const auto [ca, cb] = two_point_crossover(a, b, rng, 1.0);
    int p = 0;
    while (ca[p] == 0) ++p;
    int q = p;
    while (q < 4 && ca[q] == 1) ++q;
    counts[{p, q}]++;
    ASSERT_EQ(ca + cb, ParamVector::Ones(4));
  }
  EXPECT_EQ(counts.size(), 10u);
  for (const auto& [_, n] : counts) EXPECT_NEAR(n / 20000.0, 0.1, 0.01);
}

TEST(Mutation, FiresOnExactlyMinOfTenAndDim) {
  NoiseSource rng(6);
  const ParamVector x20 = ParamVector::Constant(20, 0.5);
  const auto y20 = uniform_npoint_mutation(x20, Bounds::unit(20), rng, 1.0, 10);
  EXPECT_EQ(((y20 - x20).array() != 0).count(), 10);
  const ParamVector x4 = ParamVector::Constant(4, 0.5);
  const auto y4 = uniform_npoint_mutation(x4, Bounds::unit(4), rng, 1.0, 10);
  EXPECT_EQ(((y4 - x4).array() != 0).count(), 4);
  EXPECT_TRUE(Bounds::unit(4).contains(y4));
}

TEST(Mutation, NotFiringKeepsVector) {
  NoiseSource rng(6);
  const ParamVector x = vec({0.1, 0.2});
  EXPECT_EQ(uniform_npoint_mutation(x, Bounds::unit(2), rng, 0.0, 10), x);
}

TEST(Mutation, FiresWithGivenProbability) {
  NoiseSource rng(7);
  const ParamVector x = ParamVector::Constant(5, 0.5);
  int fired = 0;
  for (int i = 0; i < 20000; ++i) fired += uniform_npoint_mutation(x, Bounds::unit(5), rng) != x;
  EXPECT_NEAR(fired / 20000.0, 0.15, 0.01);
}

TEST(Tournament, OracleOverDraws) {
  const std::vector<double> f = {0.1, 0.9, 0.3, 0.2};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    NoiseSource rng(seed), replay(seed);
    std::size_t best = 4;
    for (int i = 0; i < 4; ++i) {
      const auto c = replay.below(4);
      if (best == 4 || f[c] > f[best] || (f[c] == f[best] && c < best)) best = c;
    }
    EXPECT_EQ(tournament_select(f, rng), best);
  }
}

TEST(Tournament, SingletonAndTies) {
  NoiseSource rng(8);
  EXPECT_EQ(tournament_select({0.4}, rng), 0u);
  const std::vector<double> flat(6, 0.5);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    NoiseSource a(seed), b(seed);
    std::size_t lowest = 6;
    for (int i = 0; i < 4; ++i) lowest = std::min<std::size_t>(lowest, b.below(6));
    EXPECT_EQ(tournament_select(flat, a), lowest);
  }
}

TEST(Tournament, PicksIndexOneWhenAllFourDrawn) {
  // Any draw set containing index 1 must return it.
  const std::vector<double> f = {0.1, 0.9, 0.3, 0.2};
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    NoiseSource rng(seed), replay(seed);
    std::set<std::uint64_t> drawn;
    for (int i = 0; i < 4; ++i) drawn.insert(replay.below(4));
    const auto pick = tournament_select(f, rng);
    if (drawn.size() == 4) {
      ++hits;
      EXPECT_EQ(pick, 1u);
    }
  }
  EXPECT_GT(hits, 0);
}

TEST(GaSearch, BudgetAndGenerationCount) {
  const auto p = bench::build_problem("PartialLock");
  const auto r = ga_search(p, opts(3900));
  EXPECT_LE(r.spent, 3900u);
  EXPECT_EQ(r.spent % 50, 0u);
  EXPECT_LE(r.spent / 50, 78u);
  if (!r.early_stopped) EXPECT_EQ(r.spent, 3900u);
  EXPECT_TRUE(sorted_desc(r.ranking));
}

TEST(GaSearch, EliteSurvivesUnchanged) {
  const auto p = toy(threshold);
  std::vector<Execution> log;
  RunOptions o = opts(1000);
  o.on_execution = [&](const Execution& e) { log.push_back(e); };
  ga_search(p, o);
  for (std::size_t g = 0; g + 1 < log.size() / 50; ++g) {
    std::size_t elite = 50 * g;
    for (std::size_t i = 50 * g; i < 50 * (g + 1); ++i)
      if (log[i].failure) {
        elite = i;
        break;
      }
    EXPECT_EQ(log[50 * (g + 1)].params, log[elite].params) << "generation " << g;
  }
}

TEST(GaSearch, StagnationStopsEarly) {
  GAConfig cfg;
  cfg.stagnation_limit = 5;
  const auto r = ga_search(toy(idle), opts(3900), cfg);
  EXPECT_TRUE(r.early_stopped);
  EXPECT_EQ(r.spent, 50u * 6);
}

TEST(GaSearch, ChildrenStayInBounds) {
  const auto p = bench::build_problem("RacyIncrement");
  bool ok = true;
  RunOptions o = opts(2000);
  o.on_execution = [&](const Execution& e) { ok &= p.bounds.contains(e.params); };
  ga_search(p, o);
  EXPECT_TRUE(ok);
}

TEST(GaConfigTest, RejectsBadValues) {
  GAConfig c;
  c.population = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.mutation_prob = 1.5;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Snapshots, CheckpointsPastTheEndGetFinalRanking) {
  RunOptions o = opts(300);
  o.checkpoints = {30, 90, 1000};
  const auto r = brute_force(toy(threshold), o);
  ASSERT_EQ(r.snapshots.size(), 3u);
  EXPECT_EQ(r.snapshots[0].top.size(), 1u);
  EXPECT_EQ(r.snapshots[1].top.size(), 3u);
  EXPECT_EQ(r.snapshots[2].top.size(), 10u);
  EXPECT_EQ(r.snapshots[2].spent, 300u);
}

TEST(BudgetExactness, EveryMethodAtFullBudget) {
  const auto p = bench::build_problem("LostSignal");
  for (auto r : {brute_force(p, opts(3900)), sa_search(p, opts(3900)), ga_search(p, opts(3900))}) {
    EXPECT_LE(r.spent, 3900u);
    if (!r.early_stopped) EXPECT_GE(r.spent, 3871u);
  }
}

TEST(Validation, WitnessesGiveZeroAndOne) {
  const auto p = bench::build_problem("DelayedWrite");
  SimulationOptions q;
  q.noise_scale = 0.0;
  EXPECT_DOUBLE_EQ(validate(p, p.bug_witness, 1000, 1, q), 1.0);
  EXPECT_DOUBLE_EQ(validate(p, p.pass_witness, 1000, 1, q), 0.0);
}

TEST(Validation, CacheMemoizesAndMatches) {
  const auto p = bench::build_problem("SharedCounter");
  ValidationCache cache(p, 200, 5);
  const double a = cache(p.bug_witness);
  EXPECT_EQ(cache.executions(), 200u);
  EXPECT_EQ(cache(p.bug_witness), a);
  EXPECT_EQ(cache.executions(), 200u);
  EXPECT_EQ(a, validate(p, p.bug_witness, 200, 5));
}
