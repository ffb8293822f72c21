#pragma once

#include "bugamp/sim/thread_task.hpp"

#include <cstddef>

namespace bugamp::bench {

using Slot = SharedStore::Slot;

/// Bound on `while true` thread loops.
inline constexpr int kLoopIterations = 20;

/// `n` back-to-back pauses on one delay slot, like the warm-up loop in the
/// delayed-write example.
ThreadTask work(ThreadContext& ctx, std::size_t slot, int n, double factor = 1.0);

/// Test-then-set spin lock on a shared flag. The test and the set are
/// separate steps, so two threads can both get through.
ThreadTask spin_acquire(ThreadContext& ctx, Slot flag, std::size_t slot, double factor = 1.0);

/// Condition wait paired with a spin-flag lock: the flag is dropped one step
/// before the thread parks on `cond`, then re-taken after wake-up.
ThreadTask spin_wait(ThreadContext& ctx, CondId cond, Slot flag, std::size_t slot, double factor = 1.0);

/// Counting semaphore built from a lock, a condition variable and a counter.
struct Semaphore {
  LockId lock;
  CondId cond;
  Slot count;
};

ThreadTask semaphore_wait(ThreadContext& ctx, Semaphore sem);
ThreadTask semaphore_release(ThreadContext& ctx, Semaphore sem);

/// Polls the semaphore until it has a permit or `timeout` of virtual time has
/// passed. Sets `*acquired`.
ThreadTask semaphore_wait_for(ThreadContext& ctx, Semaphore sem, double timeout, std::size_t poll_slot,
                              bool* acquired);

/// Reusable two-party barrier.
struct Barrier {
  LockId lock;
  CondId cond;
  Slot arrived;
  Slot phase;
  std::int64_t parties = 2;
};

ThreadTask signal_and_wait(ThreadContext& ctx, Barrier b);

}  // namespace bugamp::bench
