#include "bugamp/search/classic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace bugamp::search {

namespace {

constexpr std::uint64_t kMethodStream = 0x6d6574686f64ULL;

NoiseSource method_rng(const RunOptions& options) { return NoiseSource(derive_seed({options.seed, kMethodStream})); }

struct VectorLess {
  bool operator()(const ParamVector& a, const ParamVector& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  }
};

}  // namespace

ParamVector sample_uniform(const Bounds& bounds, NoiseSource& rng) {
  ParamVector x(bounds.lo.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
  return x;
}

SearchResult brute_force(const ProblemSpec& problem, const RunOptions& options, std::uint64_t k) {
  if (k == 0 || options.budget < k) throw Error("brute_force needs budget >= k >= 1");
  Evaluator eval(problem, options);
  NoiseSource rng = method_rng(options);
  std::vector<CandidateEvaluation> done;
  eval.set_ranker([&done] {
    auto r = done;
    sort_ranking(r);
    return r;
  });
  const std::uint64_t n = options.budget / k;
  for (std::uint64_t i = 0; i < n; ++i) done.push_back(eval.estimate_score(sample_uniform(problem.bounds, rng), k, "bf"));
  sort_ranking(done);
  return eval.finish(std::move(done));
}

ParamVector sample_in_ball(const ParamVector& u, double epsilon, const Bounds& bounds, NoiseSource& rng) {
  const Eigen::Index dim = u.size();
  ParamVector dir(dim);
  double norm = 0.0;
  do {
    for (Eigen::Index j = 0; j < dim; ++j) dir[j] = rng.gaussian();
    norm = dir.norm();
  } while (norm == 0.0);
  const double r = epsilon * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  return bounds.clamp(u + dir * (r / norm));
}

std::optional<ParamVector> sa_update(const ParamVector& u, const std::vector<ParamVector>& points,
                                     const std::vector<bool>& failed, const Bounds& bounds) {
  ParamVector p = ParamVector::Zero(u.size()), n = ParamVector::Zero(u.size());
  std::size_t np = 0, nn = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (failed[i]) {
      p += points[i];
      ++np;
    } else {
      n += points[i];
      ++nn;
    }
  }
  if (np == 0 || nn == 0) return std::nullopt;
  p /= static_cast<double>(np);
  n /= static_cast<double>(nn);
  return bounds.clamp((p + 2.0 * u - n) / 2.0);
}

SAStep sa_next_point(Evaluator& eval, const ParamVector& u, double epsilon, std::uint64_t k, NoiseSource& rng) {
  if (!(epsilon > 0.0)) throw Error("sa_next_point needs epsilon > 0");
  if (!eval.ledger().can_afford(k)) throw BudgetExhausted(k, eval.remaining());
  const Bounds& bounds = eval.problem().bounds;
  SAStep step;
  step.center = u;
  for (std::uint64_t i = 0; i < k; ++i) {
    step.points.push_back(sample_in_ball(u, epsilon, bounds, rng));
    step.failed.push_back(eval.execute(step.points.back(), "sa"));
  }
  if (auto next = sa_update(u, step.points, step.failed, bounds)) {
    step.next = *next;
  } else {
    step.next = step.points.front();
    step.fallback = true;
  }
  return step;
}

double sa_epsilon(std::uint64_t step, std::uint64_t steps, double epsilon0, double epsilon_end) {
  if (steps <= 1) return epsilon0;
  const double t = static_cast<double>(step) / static_cast<double>(steps - 1);
  return epsilon0 * std::pow(epsilon_end / epsilon0, t);
}

SearchResult sa_search(const ProblemSpec& problem, const RunOptions& options, std::uint64_t k, double epsilon0) {
  if (k == 0 || options.budget < k) throw Error("sa_search needs budget >= k >= 1");
  Evaluator eval(problem, options);
  NoiseSource rng = method_rng(options);
  // Each step's candidate is its center, scored by the pooled outcomes of the
  // points drawn around it.
  std::vector<CandidateEvaluation> centers;
  eval.set_ranker([&centers] {
    auto r = centers;
    sort_ranking(r);
    return r;
  });
  SAState state{sample_uniform(problem.bounds, rng), epsilon0, 0};
  const std::uint64_t steps = options.budget / k;
  for (; state.step_index < steps; ++state.step_index) {
    state.epsilon = sa_epsilon(state.step_index, steps, epsilon0);
    const std::uint64_t first_exec = eval.spent();
    SAStep step = sa_next_point(eval, state.u, state.epsilon, k, rng);
    CandidateEvaluation c;
    c.params = state.u;
    c.executions_spent = k;
    for (std::uint64_t i = 0; i < k; ++i) c.seeds_used.push_back(derive_seed({options.seed, first_exec + i}));
    c.score = static_cast<double>(std::count(step.failed.begin(), step.failed.end(), true)) / static_cast<double>(k);
    c.rank_key = c.score;
    centers.push_back(std::move(c));
    state.u = step.next;
  }
  sort_ranking(centers);
  return eval.finish(std::move(centers));
}

void GAConfig::validate() const {
  if (population == 0 || tournament == 0 || mutation_points == 0 || stagnation_limit == 0 || elitism > population)
    throw Error("invalid GA configuration");
  if (crossover_prob < 0 || crossover_prob > 1 || mutation_prob < 0 || mutation_prob > 1)
    throw Error("GA probabilities must lie in [0, 1]");
}

std::pair<ParamVector, ParamVector> two_point_crossover(const ParamVector& a, const ParamVector& b, std::size_t p,
                                                        std::size_t q) {
  if (a.size() != b.size()) throw DimMismatch("crossover parents differ in dimension");
  if (!(p < q && q <= static_cast<std::size_t>(a.size()))) throw Error("crossover cuts out of range");
  ParamVector ca = a, cb = b;
  const auto len = static_cast<Eigen::Index>(q - p);
  ca.segment(static_cast<Eigen::Index>(p), len) = b.segment(static_cast<Eigen::Index>(p), len);
  cb.segment(static_cast<Eigen::Index>(p), len) = a.segment(static_cast<Eigen::Index>(p), len);
  return {ca, cb};
}

std::pair<ParamVector, ParamVector> two_point_crossover(const ParamVector& a, const ParamVector& b, NoiseSource& rng,
                                                        double prob) {
  if (a.size() != b.size()) throw DimMismatch("crossover parents differ in dimension");
  if (rng.uniform() >= prob || a.size() == 0) return {a, b};
  // Uniform over the dim*(dim+1)/2 pairs p < q.
  const auto dim = static_cast<std::uint64_t>(a.size());
  std::uint64_t pick = rng.below(dim * (dim + 1) / 2);
  std::size_t p = 0;
  while (pick >= dim - p) {
    pick -= dim - p;
    ++p;
  }
  return two_point_crossover(a, b, p, p + 1 + pick);
}

ParamVector uniform_npoint_mutation(const ParamVector& x, const Bounds& bounds, NoiseSource& rng, double prob,
                                    std::size_t points) {
  if (rng.uniform() >= prob) return x;
  const auto dim = static_cast<std::size_t>(x.size());
  std::vector<std::size_t> idx(dim);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t m = std::min(points, dim);
  // Partial Fisher-Yates picks m distinct indices.
  for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.below(dim - i)]);
  ParamVector y = x;
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = static_cast<Eigen::Index>(idx[i]);
    y[j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
  }
  return y;
}

std::size_t tournament_select(const std::vector<double>& fitness, NoiseSource& rng, std::size_t size) {
  if (fitness.empty()) throw Error("tournament over an empty population");
  std::size_t best = fitness.size();
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t c = rng.below(fitness.size());
    if (best == fitness.size() || fitness[c] > fitness[best] || (fitness[c] == fitness[best] && c < best)) best = c;
  }
  return best;
}

SearchResult ga_search(const ProblemSpec& problem, const RunOptions& options, const GAConfig& config) {
  config.validate();
  if (options.budget < config.population) throw Error("ga_search needs budget >= population");
  Evaluator eval(problem, options);
  NoiseSource rng = method_rng(options);

  struct Pool {
    std::size_t order;
    CandidateEvaluation c;
    std::uint64_t failures = 0;
  };
  std::map<ParamVector, Pool, VectorLess> pooled;
  auto ranking = [&pooled] {
    std::vector<const Pool*> entries;
    for (const auto& [_, p] : pooled) entries.push_back(&p);
    std::sort(entries.begin(), entries.end(), [](const Pool* a, const Pool* b) { return a->order < b->order; });
    std::vector<CandidateEvaluation> r;
    for (const Pool* p : entries) r.push_back(p->c);
    sort_ranking(r);
    return r;
  };
  eval.set_ranker(ranking);

  std::vector<ParamVector> pop;
  for (std::size_t i = 0; i < config.population; ++i) pop.push_back(sample_uniform(problem.bounds, rng));

  const std::uint64_t generations = options.budget / config.population;
  double best_ever = -1.0;
  std::uint64_t stale = 0;
  bool stopped = false;
  for (std::uint64_t g = 0; g < generations; ++g) {
    std::vector<double> fitness(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const std::uint64_t seed = derive_seed({options.seed, eval.spent()});
      const bool failed = eval.execute(pop[i], "ga");
      fitness[i] = failed ? 1.0 : 0.0;
      auto [it, fresh] = pooled.try_emplace(pop[i], Pool{pooled.size(), {}, 0});
      Pool& p = it->second;
      if (fresh) p.c.params = pop[i];
      p.failures += failed;
      p.c.executions_spent += 1;
      p.c.seeds_used.push_back(seed);
      p.c.score = static_cast<double>(p.failures) / static_cast<double>(p.c.executions_spent);
      p.c.rank_key = p.c.score;
    }
    const double best = *std::max_element(fitness.begin(), fitness.end());
    if (best > best_ever) {
      best_ever = best;
      stale = 0;
    } else if (++stale >= config.stagnation_limit) {
      stopped = g + 1 < generations;
      break;
    }
    if (g + 1 == generations) break;

    // Elites first, in fitness order with ties to the lowest index.
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
    std::vector<ParamVector> next;
    for (std::size_t e = 0; e < config.elitism; ++e) next.push_back(pop[order[e]]);
    while (next.size() < config.population) {
      const ParamVector& a = pop[tournament_select(fitness, rng, config.tournament)];
      const ParamVector& b = pop[tournament_select(fitness, rng, config.tournament)];
      auto [ca, cb] = two_point_crossover(a, b, rng, config.crossover_prob);
      next.push_back(uniform_npoint_mutation(ca, problem.bounds, rng, config.mutation_prob, config.mutation_points));
      if (next.size() < config.population)
        next.push_back(uniform_npoint_mutation(cb, problem.bounds, rng, config.mutation_prob, config.mutation_points));
    }
    pop = std::move(next);
  }
  return eval.finish(ranking(), stopped);
}

}  // namespace bugamp::search
