#pragma once

#include "bugamp/sim/problem.hpp"
#include "bugamp/sim/scheduler.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bugamp {

inline constexpr std::uint64_t kDefaultStepCap = 10'000;

/// One scheduler step, as exported to the event-trace CSV.
struct TraceEntry {
  std::uint64_t step_index = 0;
  VirtualTime virtual_time = 0.0;
  std::size_t thread_index = 0;
  std::string event_kind;
  std::string detail;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct SimulationOptions {
  std::uint64_t step_cap = kDefaultStepCap;
  /// Overrides the problem's noise_scale; 0 gives a noise-free run.
  std::optional<double> noise_scale;
  /// When set, one entry per step is appended.
  std::vector<TraceEntry>* trace = nullptr;
  /// Test hook called after each step with the post-step state.
  std::function<void(const SchedulerState&, const SharedStore&)> observer;
};

/// Runs one execution of `problem` under `params` with noise seeded by `seed`.
TrialOutcome simulate_trial(const ProblemSpec& problem, const ParamVector& params, std::uint64_t seed,
                            const SimulationOptions& options = {});

/// True iff the problem's invariant (if any) holds on `store`.
bool check_invariant(const ProblemSpec& problem, const SharedStore& store);

/// Writes `step_index,virtual_time,thread_index,event_kind,detail` rows.
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace, bool header = true);

}  // namespace bugamp
