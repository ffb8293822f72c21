#pragma once

#include "bugamp/search/evaluator.hpp"

#include <utility>
#include <vector>

namespace bugamp::search {

class DimMismatch : public Error {
public:
  using Error::Error;
};

/// Uniform point in the box.
ParamVector sample_uniform(const Bounds& bounds, NoiseSource& rng);

// ---------------------------------------------------------------- brute force

/// floor(B/k) uniform candidates, each scored with k trials.
SearchResult brute_force(const ProblemSpec& problem, const RunOptions& options, std::uint64_t k = 30);

// -------------------------------------------------------- simulated annealing

struct SAState {
  ParamVector u;
  double epsilon = 0.1;
  std::uint64_t step_index = 0;
};

/// Points drawn by one SA step and their single-trial outcomes.
struct SAStep {
  ParamVector center;
  ParamVector next;
  std::vector<ParamVector> points;
  std::vector<bool> failed;
  bool fallback = false;
};

/// Uniform direction times epsilon * U^(1/dim), then clamped to the box.
ParamVector sample_in_ball(const ParamVector& u, double epsilon, const Bounds& bounds, NoiseSource& rng);

/// (P + 2u - N) / 2 clamped to the box, where P and N are the means of the
/// failing and passing points. Returns nullopt when either class is empty.
std::optional<ParamVector> sa_update(const ParamVector& u, const std::vector<ParamVector>& points,
                                     const std::vector<bool>& failed, const Bounds& bounds);

/// One step: k in-ball points, one trial each.
SAStep sa_next_point(Evaluator& eval, const ParamVector& u, double epsilon, std::uint64_t k, NoiseSource& rng);

/// Radius at step t of s: epsilon0 * (epsilon_end / epsilon0)^(t / (s-1)).
double sa_epsilon(std::uint64_t step, std::uint64_t steps, double epsilon0 = 0.1, double epsilon_end = 0.01);

SearchResult sa_search(const ProblemSpec& problem, const RunOptions& options, std::uint64_t k = 30,
                       double epsilon0 = 0.1);

// ---------------------------------------------------------- genetic algorithm

struct GAConfig {
  std::size_t population = 50;
  double crossover_prob = 0.5;
  double mutation_prob = 0.15;
  std::size_t mutation_points = 10;
  std::size_t tournament = 4;
  std::size_t elitism = 1;
  std::uint64_t stagnation_limit = 100;

  void validate() const;
};

/// Swaps the slice [p, q) between copies of a and b.
std::pair<ParamVector, ParamVector> two_point_crossover(const ParamVector& a, const ParamVector& b, std::size_t p,
                                                        std::size_t q);

/// With probability `prob` swaps a uniformly chosen slice; otherwise copies.
std::pair<ParamVector, ParamVector> two_point_crossover(const ParamVector& a, const ParamVector& b, NoiseSource& rng,
                                                        double prob = 0.5);

/// With probability `prob` resamples min(points, dim) distinct components.
ParamVector uniform_npoint_mutation(const ParamVector& x, const Bounds& bounds, NoiseSource& rng,
                                    double prob = 0.15, std::size_t points = 10);

/// Index of the fittest of `size` draws with replacement; ties to the lowest index.
std::size_t tournament_select(const std::vector<double>& fitness, NoiseSource& rng, std::size_t size = 4);

SearchResult ga_search(const ProblemSpec& problem, const RunOptions& options, const GAConfig& config = {});

}  // namespace bugamp::search
