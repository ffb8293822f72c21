#pragma once

#include "bugamp/sim/types.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bugamp {

enum class ThreadStatus : std::uint8_t { Runnable, BlockedOnLock, WaitingOnCond, Done };

/// Bookkeeping for one trial: wake times, blocking records, lock ownership
/// and condition-variable waiter queues.
struct SchedulerState {
  std::vector<VirtualTime> wake_times;
  std::vector<ThreadStatus> status;
  /// Lock a thread is blocked on, or must re-acquire after a CondWait.
  std::vector<std::optional<LockId>> pending_lock;
  /// Condition variable a thread is waiting on.
  std::vector<std::optional<CondId>> waiting_cond;
  std::map<std::uint32_t, std::optional<std::size_t>> lock_owners;
  /// FIFO queue of threads blocked on each lock, in block order.
  std::map<std::uint32_t, std::deque<std::size_t>> lock_waiters;
  std::map<std::uint32_t, std::deque<std::size_t>> cv_waiters;
  VirtualTime now = 0.0;
  std::uint64_t steps_taken = 0;

  explicit SchedulerState(std::size_t thread_count = 0);

  std::size_t thread_count() const { return wake_times.size(); }
  std::size_t count(ThreadStatus s) const;
  bool all_done() const { return count(ThreadStatus::Done) == thread_count(); }
  bool any_runnable() const { return count(ThreadStatus::Runnable) > 0; }
  std::optional<std::size_t> owner(LockId lock) const;

  friend bool operator==(const SchedulerState&, const SchedulerState&) = default;
};

/// Runnable thread with the smallest wake time; ties go to the lowest index.
std::size_t next_runnable(const SchedulerState& state);

/// Applies the event yielded by `thread` (which must be the thread that was
/// just stepped). Returns a short human-readable note for the trace, or an
/// empty string when `describe` is false.
std::string apply_yield(SchedulerState& state, std::size_t thread, const YieldEvent& event, bool describe = true);

/// Applies a side effect recorded by `thread` during its step.
std::string apply_effect(SchedulerState& state, std::size_t thread, const SideEffect& effect, bool describe = true);

}  // namespace bugamp
