// Problems where unsynchronized reads and writes corrupt data or let two
// threads into a critical section.
#include "problems.hpp"

namespace bugamp::bench::detail {
namespace {

// ---- BrokenPeterson: filter lock with the two entry writes swapped ----------

namespace peterson {
constexpr int kProcesses = 4;
constexpr int kRounds = 5;
constexpr double kCriticalWeight = 1.0;
enum : Slot { kInCs, kLevels, kLast = kLevels + kProcesses };

ThreadTask process(ThreadContext& ctx, int i) {
  auto& s = ctx.store();
  const std::size_t pace = static_cast<std::size_t>(i) + 1;
  for (int r = 0; r < kRounds; ++r) {
    for (int level = 0; level <= kProcesses - 2; ++level) {
      co_yield ctx.pause(pace);
      s[kLast + level] = i;
      co_yield ctx.pause(pace);
      s[kLevels + i] = level;
      while (true) {
        co_yield ctx.pause(pace);
        bool contended = false;
        for (int k = 0; k < kProcesses; ++k)
          if (k != i && s[kLevels + k] >= level) contended = true;
        if (!(contended && s[kLast + level] == i)) break;
      }
    }
    ++s[kInCs];
    co_yield ctx.pause(kProcesses + 1, kCriticalWeight);
    --s[kInCs];
    s[kLevels + i] = -1;
    co_yield ctx.pause(pace);
  }
}
}  // namespace peterson

// ---- DelayedWrite: another write lands between set and check ----------------

namespace delayed {
enum : Slot { kX };
constexpr std::int64_t kTarget = 1;
constexpr int kRepeats = 10;

ThreadTask setter(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int i = 0; i < kRepeats; ++i) {
    co_yield ctx.pause(1);
    s[kX] = kTarget;
  }
  co_yield ctx.pause(2);
  if (s[kX] != kTarget) {
    co_yield ctx.pause(3);
    ctx.fail("x != TARGET");
  }
}

ThreadTask intruder(ThreadContext& ctx) {
  co_yield ctx.pause(4);
  ctx.store()[kX] = 3;
}
}  // namespace delayed

// ---- RacyIncrement: read, increment, write, then test a == 1 ----------------

namespace racy {
enum : Slot { kA, kEntered };
constexpr int kWarmup = 20;
constexpr double kLeadWeight = 10.0;

ThreadTask worker(ThreadContext& ctx, std::size_t first_slot) {
  auto& s = ctx.store();
  co_await work(ctx, first_slot, kWarmup, kLeadWeight);
  auto temp = s[kA];
  co_yield ctx.pause(first_slot + 1);
  temp = temp + 1;
  co_yield ctx.pause(first_slot + 2);
  s[kA] = temp;
  co_yield ctx.pause(first_slot + 3);
  if (s[kA] == 1) {
    ++s[kEntered];
    co_yield ctx.pause(first_slot + 3);
  }
}
}  // namespace racy

// ---- SharedCounter: unsynchronized counter with per-thread thresholds -------

namespace counter {
enum : Slot { kCounter, kInCs };
constexpr int kRounds = kLoopIterations;

ThreadTask dragon(ThreadContext& ctx, std::int64_t threshold, std::size_t pace, std::size_t critical) {
  auto& s = ctx.store();
  for (int r = 0; r < kRounds; ++r) {
    co_yield ctx.pause(pace);
    const auto read = s[kCounter];
    co_yield ctx.pause(pace);
    s[kCounter] = read + 1;
    co_yield ctx.pause(pace);
    if (s[kCounter] == threshold) {
      ++s[kInCs];
      co_yield ctx.pause(critical);
      --s[kInCs];
    }
  }
}
}  // namespace counter

// ---- SharedFlag: boolean flag as a lock --------------------------------------

namespace flag {
enum : Slot { kFlag, kInCs };
constexpr int kRounds = 1;
constexpr double kSetWeight = 0.1;
constexpr double kRemainderWeight = 10.0;

ThreadTask army(ThreadContext& ctx, std::size_t pace, std::size_t critical) {
  auto& s = ctx.store();
  for (int r = 0; r < kRounds; ++r) {
    co_yield ctx.pause(pace, kRemainderWeight);
    while (true) {
      if (s[kFlag] == 0) break;
      co_yield ctx.pause(pace);
    }
    co_yield ctx.pause(pace, kSetWeight);
    s[kFlag] = 1;
    ++s[kInCs];
    co_yield ctx.pause(critical);
    --s[kInCs];
    s[kFlag] = 0;
  }
}
}  // namespace flag

// ---- PhantomPermit / SemaphoreLeak: release after a timed-out wait ----------

namespace permits {
enum : Slot { kCount, kInCs };
constexpr Semaphore kSem{LockId{0}, CondId{0}, kCount};
constexpr int kRounds = 3;
constexpr double kTimeoutWeight = 10.0;

// Acquirer that spins on the raw count: test and decrement are separate steps.
ThreadTask spinning_acquirer(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int r = 0; r < kRounds; ++r) {
    while (true) {
      co_yield ctx.pause(1);
      if (s[kCount] > 0) break;
    }
    --s[kCount];
    ++s[kInCs];
    co_yield ctx.pause(2);
    --s[kInCs];
    ++s[kCount];
  }
}

ThreadTask blocking_acquirer(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int r = 0; r < kRounds; ++r) {
    co_yield ctx.pause(1);
    co_await semaphore_wait(ctx, kSem);
    ++s[kInCs];
    co_yield ctx.pause(2);
    --s[kInCs];
    co_await semaphore_release(ctx, kSem);
  }
}

ThreadTask timed_failer(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int r = 0; r < kRounds; ++r) {
    co_yield ctx.pause(3);
    bool acquired = false;
    const double timeout = ctx.speed() * ctx.params()[4] * kTimeoutWeight;
    co_await semaphore_wait_for(ctx, kSem, timeout, 3, &acquired);
    if (acquired) {
      ++s[kInCs];
      co_yield ctx.pause(5);
      --s[kInCs];
    }
    co_await semaphore_release(ctx, kSem);
  }
}
}  // namespace permits

bool at_most_one_inside(const SharedStore& s, Slot in_cs) { return s[in_cs] <= 1; }

}  // namespace

ProblemSpec broken_peterson() {
  using namespace peterson;
  auto p = skeleton("BrokenPeterson", {});
  for (int i = 0; i < kProcesses; ++i) p.param_names.push_back("p" + std::to_string(i) + "_pace");
  p.param_names.push_back("critical");
  p.bounds = Bounds::unit(p.param_names.size());
  p.init = [] {
    SharedStore s;
    s.declare("in_cs");
    s.declare_array("levels", kProcesses, -1);
    s.declare_array("last_to_enter", kProcesses - 1, -1);
    return s;
  };
  for (int i = 0; i < kProcesses; ++i) p.threads.push_back([i](ThreadContext& c) { return process(c, i); });
  p.invariant = [](const SharedStore& s) { return at_most_one_inside(s, kInCs); };
  p.taxonomy = {{Effect::ConcurrentAccess}, RootCause::MissingWeakGuard};
  p.bug_witness = vec({0.86, 0.12, 0.05, 0.64, 0.16, 0.89});
  p.pass_witness = vec({0.22, 0.85, 0.85, 0.75, 0.01, 0.29});
  p.insight = "writing last_to_enter before levels lets two processes pass the same level";
  return p;
}

ProblemSpec delayed_write() {
  using namespace delayed;
  auto p = skeleton("DelayedWrite", {"t0_set", "t0_check", "t0_assert", "t1_write"});
  p.init = [] {
    SharedStore s;
    s.declare("x");
    return s;
  };
  p.threads = {setter, intruder};
  p.taxonomy = {{Effect::UnexpectedData, Effect::ConcurrentAccess}, RootCause::IncorrectOrdering};
  p.bug_witness = vec({0.52, 0.02, 0.92, 0.23, 0.85});
  p.pass_witness = vec({0.44, 0.38, 0.77, 0.45, 0.79});
  p.insight = "the intruding write falls between the last set and the check";
  return p;
}

ProblemSpec racy_increment() {
  using namespace racy;
  auto p = skeleton("RacyIncrement", {"t0_start", "t0_read", "t0_inc", "t0_write", "t1_start", "t1_read",
                                      "t1_inc", "t1_write"});
  p.init = [] {
    SharedStore s;
    s.declare("a");
    s.declare("entered");
    return s;
  };
  p.threads = {[](ThreadContext& c) { return worker(c, 1); }, [](ThreadContext& c) { return worker(c, 5); }};
  p.invariant = [](const SharedStore& s) { return s[kEntered] <= 1; };
  p.taxonomy = {{Effect::UnexpectedData, Effect::ConcurrentAccess}, RootCause::NonAtomicOp};
  p.bug_witness = vec({0.11, 0.03, 0.76, 0.11, 0.15, 0.03, 0.87, 0.58, 0.77});
  p.pass_witness = vec({0.11, 0.88, 0.35, 0.15, 0.16, 0.75, 0.33, 0.54, 0.50});
  p.insight = "both threads read zero before either writes one";
  return p;
}

ProblemSpec shared_counter() {
  using namespace counter;
  auto p = skeleton("SharedCounter", {"t0_pace", "t0_critical", "t1_pace", "t1_critical"});
  p.init = [] {
    SharedStore s;
    s.declare("counter");
    s.declare("in_cs");
    return s;
  };
  p.threads = {[](ThreadContext& c) { return dragon(c, 5, 1, 2); },
               [](ThreadContext& c) { return dragon(c, 3, 3, 4); }};
  p.invariant = [](const SharedStore& s) { return at_most_one_inside(s, kInCs); };
  p.taxonomy = {{Effect::UnexpectedData, Effect::ConcurrentAccess}, RootCause::NonAtomicOp};
  p.bug_witness = vec({0.75, 0.10, 0.90, 0.44, 0.93});
  p.pass_witness = vec({0.11, 0.88, 0.35, 0.15, 0.16});
  p.insight = "the counter reaches the second threshold while the first thread is still inside";
  return p;
}

ProblemSpec shared_flag() {
  using namespace flag;
  auto p = skeleton("SharedFlag", {"a0_pace", "a0_critical", "a1_pace", "a1_critical"});
  p.init = [] {
    SharedStore s;
    s.declare("flag");
    s.declare("in_cs");
    return s;
  };
  p.threads = {[](ThreadContext& c) { return army(c, 1, 2); }, [](ThreadContext& c) { return army(c, 3, 4); }};
  p.invariant = [](const SharedStore& s) { return at_most_one_inside(s, kInCs); };
  p.taxonomy = {{Effect::ConcurrentAccess}, RootCause::MissingWeakGuard};
  p.bug_witness = vec({0.85, 0.59, 0.16, 0.59, 0.14});
  p.pass_witness = vec({0.67, 0.60, 0.71, 0.31, 0.14});
  p.insight = "both armies see the flag down before either raises it";
  return p;
}

ProblemSpec phantom_permit() {
  using namespace permits;
  auto p = skeleton("PhantomPermit", {"t0_pace", "t0_critical", "t1_poll", "t1_timeout", "t1_critical"});
  p.init = [] {
    SharedStore s;
    s.declare("permits", 1);
    s.declare("in_cs");
    return s;
  };
  p.threads = {spinning_acquirer, timed_failer};
  p.invariant = [](const SharedStore& s) { return at_most_one_inside(s, kInCs); };
  p.taxonomy = {{Effect::ConcurrentAccess}, RootCause::MisuseOfPrimitives};
  p.bug_witness = vec({0.03, 0.05, 0.92, 0.72, 0.03, 0.33});
  p.pass_witness = vec({0.11, 0.88, 0.35, 0.15, 0.16, 0.75});
  p.insight = "a timed-out wait still releases, adding a permit nobody took";
  return p;
}

ProblemSpec semaphore_leak() {
  using namespace permits;
  auto p = skeleton("SemaphoreLeak", {"t0_pace", "t0_critical", "t1_poll", "t1_timeout", "t1_critical"});
  p.init = [] {
    SharedStore s;
    s.declare("permits", 1);
    s.declare("in_cs");
    return s;
  };
  p.threads = {blocking_acquirer, timed_failer};
  p.invariant = [](const SharedStore& s) { return at_most_one_inside(s, kInCs); };
  p.taxonomy = {{Effect::ConcurrentAccess}, RootCause::MisuseOfPrimitives};
  p.bug_witness = vec({0.03, 0.05, 0.92, 0.72, 0.03, 0.33});
  p.pass_witness = vec({0.11, 0.88, 0.35, 0.15, 0.16, 0.75});
  p.insight = "releasing without owning inflates the semaphore count";
  return p;
}

}  // namespace bugamp::bench::detail
