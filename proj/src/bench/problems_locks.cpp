// Problems whose bug lives in how locks and monitors are taken.
#include "problems.hpp"

namespace bugamp::bench::detail {
namespace {

// ---- AtomicityBypass: unlock before update ----------------------------------

namespace atomicity {
enum : Slot { kMutex, kCounter, kIncrements };
constexpr int kWarmup = 10;
constexpr double kLeadWeight = 5.0;
constexpr double kWriteWeight = 0.25;

ThreadTask worker(ThreadContext& ctx, std::size_t start, std::size_t op) {
  auto& s = ctx.store();
  co_await work(ctx, start, kWarmup, kLeadWeight);
  co_await spin_acquire(ctx, kMutex, op);
  co_yield ctx.pause(op);
  const auto local = s[kCounter];
  co_yield ctx.pause(op);
  s[kMutex] = 0;
  co_yield ctx.pause(op, kWriteWeight);
  s[kCounter] = local + 1;
  ++s[kIncrements];
}
}  // namespace atomicity

// ---- FlaggedDeadlock --------------------------------------------------------

namespace flagged {
enum : Slot { kFlag };
constexpr LockId kMutex{0}, kMutex2{1}, kMutex3{2};
constexpr int kRounds = 2;
constexpr double kHoldWeight = 0.05;
constexpr double kThinkWeight = 4.0;

ThreadTask first(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int i = 0; i < kRounds; ++i) {
    co_yield ctx.pause(1);
    if (!ctx.owner_of(kMutex)) {
      co_yield ctx.acquire(kMutex3);
      co_yield ctx.acquire(kMutex);
      co_yield ctx.pause(2);
      ctx.release(kMutex);
      co_yield ctx.acquire(kMutex2);
      s[kFlag] = 0;
      ctx.release(kMutex2);
      ctx.release(kMutex3);
    } else {
      co_yield ctx.acquire(kMutex2);
      s[kFlag] = 1;
      ctx.release(kMutex2);
    }
  }
}

ThreadTask second(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int i = 0; i < kRounds; ++i) {
    co_yield ctx.pause(3, kThinkWeight);
    if (s[kFlag] != 0) {
      co_yield ctx.acquire(kMutex2);
      co_yield ctx.acquire(kMutex);
      s[kFlag] = 0;
      co_yield ctx.pause(4, kHoldWeight);
      ctx.release(kMutex);
      // Re-enters mutex2, which this thread still holds.
      co_yield ctx.acquire(kMutex2);
      s[kFlag] = 0;
      ctx.release(kMutex2);
    } else {
      co_yield ctx.acquire(kMutex);
      s[kFlag] = 0;
      co_yield ctx.pause(4, kHoldWeight);
      ctx.release(kMutex);
    }
  }
}
}  // namespace flagged

// ---- LockOrderInversion -----------------------------------------------------

namespace inversion {
constexpr LockId kFirst{0}, kSecond{1};
constexpr int kWarmup = 10;
constexpr double kGapWeight = 0.5;
constexpr double kLeadWeight = 6.0;

ThreadTask worker(ThreadContext& ctx, std::size_t start, std::size_t gap, LockId a, LockId b) {
  co_await work(ctx, start, kWarmup, kLeadWeight);
  co_yield ctx.acquire(a);
  co_yield ctx.pause(gap, kGapWeight);
  co_yield ctx.acquire(b);
  co_yield ctx.pause(gap);
  ctx.release(b);
  ctx.release(a);
}
}  // namespace inversion

// ---- PartialLock ------------------------------------------------------------

namespace partial {
enum : Slot { kI };
constexpr LockId kMutex{0};
constexpr int kRounds = 3;
constexpr double kAdderWeight = 6.0;

ThreadTask adder(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int i = 0; i < kRounds; ++i) {
    co_yield ctx.pause(1, kAdderWeight);
    co_yield ctx.acquire(kMutex);
    s[kI] += 2;
    co_yield ctx.pause(2);
    if (s[kI] == 5) ctx.fail("i == 5");
    ctx.release(kMutex);
  }
}

ThreadTask subtractor(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int i = 0; i < kRounds; ++i) {
    co_yield ctx.pause(3);
    co_yield ctx.acquire(kMutex);
    s[kI] -= 1;
    co_yield ctx.pause(4);
    ctx.release(kMutex);
  }
}
}  // namespace partial

}  // namespace

ProblemSpec atomicity_bypass() {
  using namespace atomicity;
  auto p = skeleton("AtomicityBypass", {"t0_start", "t0_op", "t1_start", "t1_op"});
  p.init = [] {
    SharedStore s;
    s.declare("mutex");
    s.declare("counter");
    s.declare("increments");
    return s;
  };
  p.threads = {[](ThreadContext& c) { return worker(c, 1, 2); }, [](ThreadContext& c) { return worker(c, 3, 4); }};
  p.invariant = [](const SharedStore& s) { return s[kCounter] == s[kIncrements]; };
  p.taxonomy = {{Effect::UnexpectedData}, RootCause::MisuseOfPrimitives};
  p.bug_witness = vec({0.19, 0.16, 0.61, 0.17, 0.43});
  p.pass_witness = vec({0.67, 0.43, 0.78, 0.25, 0.39});
  p.insight = "the mutex is released before the counter write, so a second thread can read the stale value";
  return p;
}

ProblemSpec flagged_deadlock() {
  using namespace flagged;
  auto p = skeleton("FlaggedDeadlock", {"t0_pace", "t0_critical", "t1_pace", "t1_hold"});
  p.init = [] {
    SharedStore s;
    s.declare("flag");
    return s;
  };
  p.threads = {first, second};
  p.taxonomy = {{Effect::Deadlock}, RootCause::MisuseOfPrimitives};
  p.bug_witness = vec({0.72, 0.01, 0.81, 0.07, 0.86});
  p.pass_witness = vec({0.67, 0.43, 0.78, 0.25, 0.39});
  p.insight = "a failed try-lock raises the flag; the flag path re-enters a held monitor";
  return p;
}

ProblemSpec lock_order_inversion() {
  using namespace inversion;
  auto p = skeleton("LockOrderInversion", {"t0_start", "t0_gap", "t1_start", "t1_gap"});
  p.threads = {[](ThreadContext& c) { return worker(c, 1, 2, kFirst, kSecond); },
               [](ThreadContext& c) { return worker(c, 3, 4, kSecond, kFirst); }};
  p.taxonomy = {{Effect::Deadlock}, RootCause::IncorrectOrdering};
  p.bug_witness = vec({0.04, 0.01, 0.69, 0.01, 0.43});
  p.pass_witness = vec({0.04, 0.44, 0.35, 0.54, 0.20});
  p.insight = "each thread holds one lock while requesting the other";
  return p;
}

ProblemSpec partial_lock() {
  using namespace partial;
  auto p = skeleton("PartialLock", {"t0_pace", "t0_critical", "t1_pace", "t1_critical"});
  p.init = [] {
    SharedStore s;
    s.declare("i");
    return s;
  };
  p.threads = {adder, subtractor};
  p.taxonomy = {{Effect::UnexpectedData}, RootCause::MissingWeakGuard};
  p.bug_witness = vec({0.81, 0.01, 0.56, 0.91, 0.43});
  p.pass_witness = vec({0.50, 0.04, 0.81, 0.96, 0.83});
  p.insight = "the value checked inside the lock depends on how many decrements slipped in between";
  return p;
}

}  // namespace bugamp::bench::detail
