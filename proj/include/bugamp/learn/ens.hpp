#pragma once

#include "bugamp/learn/stacking.hpp"
#include "bugamp/search/evaluator.hpp"

namespace bugamp::learn {

struct EnsConfig {
  std::uint64_t bootstrap = 200;
  std::uint64_t explore = 100;
  std::uint64_t exploit = 100;
  /// Fresh uniform candidates scored per exploitation batch.
  std::size_t pool = 10'000;
  bool smote = true;
  SmoteConfig smote_cfg;
  StackingConfig stacking;
};

/// Model-guided search: a random bootstrap, then batches of random points
/// plus the model's top-ranked fresh candidates, refitting after each batch.
/// A final batch smaller than explore + exploit is split half random, half
/// ranked. Until both classes have been seen every point is random.
/// The ranking orders all executed points by model probability.
search::SearchResult ens_search(const ProblemSpec& problem, const search::RunOptions& options,
                                const EnsConfig& config = {});

}  // namespace bugamp::learn
