// Problems built around waiting and waking: condition variables, barriers
// and hand-rolled wait flags.
#include "problems.hpp"

namespace bugamp::bench::detail {
namespace {

// ---- BrokenBarrier: two-party barrier shared by three threads ---------------

namespace barrier {
enum : Slot { kCharge, kArrived, kPhase };
constexpr Barrier kBarrier{LockId{0}, CondId{0}, kArrived, kPhase, 2};
constexpr int kRounds = 1;
constexpr int kFirstWork = 2;
constexpr int kSecondWork = 8;
constexpr double kResetWeight = 0.1;

ThreadTask first(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int r = 0; r < kRounds; ++r) {
    co_await work(ctx, 1, kFirstWork);
    ++s[kCharge];
    co_await signal_and_wait(ctx, kBarrier);
    if (s[kCharge] < 2) ctx.fail("charge < 2 after barrier");
  }
}

ThreadTask second(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int r = 0; r < kRounds; ++r) {
    co_await work(ctx, 2, kSecondWork);
    ++s[kCharge];
    co_await signal_and_wait(ctx, kBarrier);
  }
}

ThreadTask third(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int r = 0; r < kRounds; ++r) {
    co_yield ctx.pause(3);
    ++s[kCharge];
    co_await signal_and_wait(ctx, kBarrier);
    co_yield ctx.pause(4);
    co_await signal_and_wait(ctx, kBarrier);
    co_yield ctx.pause(5, kResetWeight);
    s[kCharge] = 0;
  }
}
}  // namespace barrier

// ---- IfNotWhile: `if` instead of `while` around Monitor.Wait ----------------

namespace ifnot {
enum : Slot { kCount };
constexpr LockId kMutex{0};
constexpr CondId kPulse{0};
constexpr int kRounds = 2;
constexpr double kConsumeWeight = 6.0;

ThreadTask consumer(ThreadContext& ctx, std::size_t pace) {
  auto& s = ctx.store();
  for (int r = 0; r < kRounds; ++r) {
    co_yield ctx.pause(pace, kConsumeWeight);
    co_yield ctx.acquire(kMutex);
    if (s[kCount] == 0) co_yield ctx.wait(kPulse, kMutex);
    --s[kCount];
    ctx.release(kMutex);
  }
}

ThreadTask producer(ThreadContext& ctx) {
  auto& s = ctx.store();
  for (int r = 0; r < 2 * kRounds; ++r) {
    co_yield ctx.pause(3);
    co_yield ctx.acquire(kMutex);
    ++s[kCount];
    ctx.notify_all(kPulse);
    ctx.release(kMutex);
  }
}
}  // namespace ifnot

// ---- LostSignal: waiter checks the flag once -------------------------------

namespace lost {
enum : Slot { kMutex, kFlag };
constexpr CondId kCv{0};
constexpr int kWarmup = 10;

ThreadTask waiter(ThreadContext& ctx) {
  auto& s = ctx.store();
  co_await work(ctx, 1, kWarmup);
  co_await spin_acquire(ctx, kMutex, 2);
  co_yield ctx.pause(2);
  if (s[kFlag] == 0) co_await spin_wait(ctx, kCv, kMutex, 2);
  co_yield ctx.pause(2);
  s[kMutex] = 0;
}

ThreadTask signaler(ThreadContext& ctx) {
  auto& s = ctx.store();
  co_await work(ctx, 3, kWarmup);
  co_await spin_acquire(ctx, kMutex, 4);
  co_yield ctx.pause(4);
  s[kFlag] = 1;
  co_yield ctx.pause(4);
  ctx.notify_all(kCv);
  co_yield ctx.pause(4);
  s[kMutex] = 0;
}
}  // namespace lost

// ---- RaceToWait: non-atomic arrival counter ---------------------------------

namespace racewait {
enum : Slot { kWaiters };
constexpr CondId kArrival{0};
constexpr int kWarmup = 10;
constexpr double kLeadWeight = 10.0;

ThreadTask worker(ThreadContext& ctx, std::size_t start, std::size_t read_gap, std::size_t check_gap) {
  auto& s = ctx.store();
  co_await work(ctx, start, kWarmup, kLeadWeight);
  const auto temp = s[kWaiters];
  co_yield ctx.pause(read_gap);
  s[kWaiters] = temp + 1;
  co_yield ctx.pause(check_gap);
  if (s[kWaiters] < 2)
    co_yield ctx.wait(kArrival);
  else
    ctx.notify_all(kArrival);
}
}  // namespace racewait

// ---- SignalThenWait: flag raised before the waiter is armed ----------------

namespace signalwait {
enum : Slot { kMutex, kFlag, kWaitBlocked };
constexpr CondId kCv{0};
constexpr int kWarmup = 10;

ThreadTask waiter(ThreadContext& ctx) {
  auto& s = ctx.store();
  co_await work(ctx, 1, kWarmup);
  co_await spin_acquire(ctx, kMutex, 2);
  co_yield ctx.pause(2);
  while (s[kFlag] == 0) {
    s[kWaitBlocked] = 1;
    co_await spin_wait(ctx, kCv, kMutex, 2);
    s[kWaitBlocked] = 0;
  }
  co_yield ctx.pause(2);
  s[kMutex] = 0;
}

ThreadTask signaler(ThreadContext& ctx) {
  auto& s = ctx.store();
  co_await work(ctx, 3, kWarmup);
  s[kFlag] = 1;
  co_await spin_acquire(ctx, kMutex, 4);
  co_yield ctx.pause(4);
  ctx.notify_all(kCv);
  co_yield ctx.pause(4);
  s[kMutex] = 0;
}
}  // namespace signalwait

// ---- SleepingGuard: consumer sleeps on a flag without rechecking the queue --

namespace sleeping {
enum : Slot { kQueue, kWaiting };
constexpr CondId kWake{0};
constexpr double kArmWeight = 0.25;

ThreadTask consumer(ThreadContext& ctx) {
  auto& s = ctx.store();
  co_yield ctx.pause(1);
  if (s[kQueue] == 0) {
    co_yield ctx.pause(2, kArmWeight);
    s[kWaiting] = 1;
    co_yield ctx.wait(kWake);
  }
  co_yield ctx.pause(3);
  --s[kQueue];
}

ThreadTask producer(ThreadContext& ctx) {
  auto& s = ctx.store();
  co_yield ctx.pause(4);
  ++s[kQueue];
  co_yield ctx.pause(5);
  if (s[kWaiting] != 0) {
    s[kWaiting] = 0;
    ctx.notify_all(kWake);
  }
}
}  // namespace sleeping

}  // namespace

ProblemSpec broken_barrier() {
  using namespace barrier;
  auto p = skeleton("BrokenBarrier", {"t0_work", "t1_work", "t2_pace", "t2_between", "t2_reset"});
  p.init = [] {
    SharedStore s;
    s.declare("charge");
    s.declare("barrier_arrived");
    s.declare("barrier_phase");
    return s;
  };
  p.threads = {first, second, third};
  p.taxonomy = {{Effect::Deadlock}, RootCause::MisuseOfPrimitives};
  p.bug_witness = vec({0.51, 0.01, 0.04, 0.92, 0.35, 0.52});
  p.pass_witness = vec({0.11, 0.88, 0.35, 0.15, 0.16, 0.75});
  p.insight = "a two-party barrier with three callers lets the wrong pair meet";
  return p;
}

ProblemSpec if_not_while() {
  using namespace ifnot;
  auto p = skeleton("IfNotWhile", {"c0_pace", "c1_pace", "producer_pace"});
  p.init = [] {
    SharedStore s;
    s.declare("queue_count");
    return s;
  };
  p.threads = {[](ThreadContext& c) { return consumer(c, 1); }, [](ThreadContext& c) { return consumer(c, 2); },
               producer};
  p.invariant = [](const SharedStore& s) { return s[kCount] >= 0; };
  p.taxonomy = {{Effect::Deadlock, Effect::UnexpectedData}, RootCause::MissingWeakGuard};
  p.bug_witness = vec({0.09, 0.17, 0.05, 0.67});
  p.pass_witness = vec({0.67, 0.60, 0.71, 0.31});
  p.insight = "a woken consumer dequeues without rechecking the count";
  return p;
}

ProblemSpec lost_signal() {
  using namespace lost;
  auto p = skeleton("LostSignal", {"t0_start", "t0_op", "t1_start", "t1_op"});
  p.init = [] {
    SharedStore s;
    s.declare("mutex");
    s.declare("flag");
    return s;
  };
  p.threads = {waiter, signaler};
  p.taxonomy = {{Effect::Deadlock}, RootCause::MissingWeakGuard};
  p.bug_witness = vec({0.42, 0.43, 0.97, 0.73, 0.05});
  p.pass_witness = vec({0.67, 0.60, 0.71, 0.31, 0.14});
  p.insight = "the notification fires before the waiter parks";
  return p;
}

ProblemSpec race_to_wait() {
  using namespace racewait;
  auto p = skeleton("RaceToWait", {"t0_start", "t0_read_gap", "t0_check_gap", "t1_start", "t1_read_gap",
                                   "t1_check_gap"});
  p.init = [] {
    SharedStore s;
    s.declare("waiters");
    return s;
  };
  p.threads = {[](ThreadContext& c) { return worker(c, 1, 2, 3); },
               [](ThreadContext& c) { return worker(c, 4, 5, 6); }};
  p.taxonomy = {{Effect::Deadlock}, RootCause::NonAtomicOp};
  p.bug_witness = vec({0.49, 0.36, 0.79, 0.37, 0.36, 0.52, 0.36});
  p.pass_witness = vec({0.67, 0.60, 0.71, 0.31, 0.14, 0.16, 0.17});
  p.insight = "both threads read the counter before either writes it back";
  return p;
}

ProblemSpec signal_then_wait() {
  using namespace signalwait;
  auto p = skeleton("SignalThenWait", {"t0_start", "t0_op", "t1_start", "t1_op"});
  p.init = [] {
    SharedStore s;
    s.declare("mutex");
    s.declare("flag");
    s.declare("wait_blocked");
    return s;
  };
  p.threads = {waiter, signaler};
  p.taxonomy = {{Effect::Deadlock}, RootCause::IncorrectOrdering};
  p.bug_witness = vec({0.76, 0.16, 0.91, 0.48, 0.01});
  p.pass_witness = vec({0.54, 0.51, 0.03, 0.81, 0.39});
  p.insight = "the signal is sent while the waiter sits between its check and its wait";
  return p;
}

ProblemSpec sleeping_guard() {
  using namespace sleeping;
  auto p = skeleton("SleepingGuard", {"c_check", "c_arm", "c_consume", "p_push", "p_check"});
  p.init = [] {
    SharedStore s;
    s.declare("queue_size");
    s.declare("waiting");
    return s;
  };
  p.threads = {consumer, producer};
  p.taxonomy = {{Effect::Deadlock}, RootCause::MissingWeakGuard};
  p.bug_witness = vec({0.01, 0.42, 0.82, 0.27, 0.51, 0.05});
  p.pass_witness = vec({0.11, 0.88, 0.35, 0.15, 0.16, 0.75});
  p.insight = "the producer looks for the waiting flag before the consumer raises it";
  return p;
}

}  // namespace bugamp::bench::detail
