#include "bugamp/sim/simulate.hpp"

#include "bugamp/util/text.hpp"

#include <memory>
#include <ostream>

namespace bugamp {
namespace {

const char* kind_name(const YieldEvent& ev) {
  switch (ev.index()) {
    case 0: return "Delay";
    case 1: return "AcquireLock";
    case 2: return "CondWait";
    default: return "Done";
  }
}

TrialOutcome finish(OutcomeKind kind, BugKind bug, const SchedulerState& s) {
  return {kind, bug, s.now, s.steps_taken};
}

}  // namespace

bool check_invariant(const ProblemSpec& problem, const SharedStore& store) {
  return !problem.invariant || (*problem.invariant)(store);
}

TrialOutcome simulate_trial(const ProblemSpec& problem, const ParamVector& params, std::uint64_t seed,
                            const SimulationOptions& options) {
  if (!problem.bounds.contains(params))
    throw BoundsViolation(problem.name + ": parameter vector outside bounds or of wrong dimension");
  if (options.step_cap == 0) throw Error("step_cap must be positive");

  SharedStore store = problem.init ? problem.init() : SharedStore{};
  NoiseSource noise(seed);
  const double scale = options.noise_scale.value_or(problem.noise_scale);
  const std::size_t n = problem.threads.size();

  SchedulerState state(n);
  VirtualTime clock = 0.0;
  std::vector<std::unique_ptr<ThreadContext>> contexts;
  std::vector<ThreadTask> tasks;
  contexts.reserve(n);
  tasks.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    contexts.push_back(std::make_unique<ThreadContext>(t, store, params, noise, scale, clock));
    contexts.back()->bind_lock_table([&state](LockId l) { return state.owner(l); });
    tasks.push_back(problem.threads[t](*contexts.back()));
  }
  if (n == 0) return finish(OutcomeKind::Pass, BugKind::None, state);

  while (true) {
    if (state.steps_taken >= options.step_cap) return finish(OutcomeKind::HorizonExceeded, BugKind::None, state);

    const std::size_t t = next_runnable(state);
    state.now = state.wake_times[t];
    clock = state.now;

    const YieldEvent ev = tasks[t].resume();
    ThreadContext& ctx = *contexts[t];

    const bool describe = options.trace != nullptr;
    std::string detail;
    for (const auto& fx : ctx.take_effects()) {
      if (!detail.empty()) detail += "; ";
      detail += apply_effect(state, t, fx, describe);
    }
    const std::string note = apply_yield(state, t, ev, describe);
    if (!note.empty()) detail += (detail.empty() ? "" : "; ") + note;
    ++state.steps_taken;

    if (options.trace)
      options.trace->push_back({state.steps_taken - 1, state.now, t, kind_name(ev), std::move(detail)});
    if (options.observer) options.observer(state, store);

    if (ctx.failed()) {
      if (options.trace) options.trace->back().detail += " assert: " + ctx.failure();
      return finish(OutcomeKind::BugTriggered, BugKind::Assertion, state);
    }
    if (!check_invariant(problem, store)) return finish(OutcomeKind::BugTriggered, BugKind::InvariantViolation, state);
    if (state.all_done()) return finish(OutcomeKind::Pass, BugKind::None, state);
    if (!state.any_runnable()) return finish(OutcomeKind::BugTriggered, BugKind::Deadlock, state);
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace, bool header) {
  if (header) out << "step_index,virtual_time,thread_index,event_kind,detail\n";
  for (const auto& e : trace) {
    out << e.step_index << ',' << text::fixed(e.virtual_time) << ',' << e.thread_index << ',' << e.event_kind << ','
        << text::csv_field(e.detail) << '\n';
  }
}

}  // namespace bugamp
