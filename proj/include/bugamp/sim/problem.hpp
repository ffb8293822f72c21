#pragma once

#include "bugamp/sim/shared_store.hpp"
#include "bugamp/sim/thread_task.hpp"
#include "bugamp/sim/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bugamp {

enum class Effect : std::uint8_t { Deadlock, UnexpectedData, ConcurrentAccess };
enum class RootCause : std::uint8_t { MissingWeakGuard, NonAtomicOp, IncorrectOrdering, MisuseOfPrimitives };

std::string to_string(Effect e);
std::string to_string(RootCause c);

struct TaxonomyTag {
  std::vector<Effect> effects;  // one or two entries
  RootCause root_cause = RootCause::MissingWeakGuard;
};

using Invariant = std::function<bool(const SharedStore&)>;
using FailureClassifier = std::function<bool(const TrialOutcome&)>;

/// Default classifier: every BugTriggered outcome is a failure.
inline bool bug_outcome_is_failure(const TrialOutcome& o) { return o.is_bug(); }

/// A benchmark program: threads, shared state, correctness predicates and the
/// parameter box. Immutable once built; every trial instantiates fresh state.
struct ProblemSpec {
  std::string name;
  Bounds bounds;
  std::vector<std::string> param_names;  // "C", then one label per delay slot
  std::function<SharedStore()> init;
  std::vector<ThreadProgram> threads;
  std::optional<Invariant> invariant;
  FailureClassifier failure_classifier = bug_outcome_is_failure;
  TaxonomyTag taxonomy;
  ParamVector bug_witness;
  ParamVector pass_witness;
  /// Distortion amplitude as a fraction of C.
  double noise_scale = 0.1;
  std::string insight;

  std::size_t dim() const { return bounds.dim(); }
  bool is_failure(const TrialOutcome& o) const { return failure_classifier(o); }
};

}  // namespace bugamp
