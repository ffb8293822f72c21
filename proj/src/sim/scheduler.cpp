#include "bugamp/sim/scheduler.hpp"

#include "bugamp/util/text.hpp"

#include <algorithm>
#include <cmath>

namespace bugamp {
namespace {

void make_runnable(SchedulerState& s, std::size_t t) {
  s.status[t] = ThreadStatus::Runnable;
  s.wake_times[t] = s.now;
  s.pending_lock[t].reset();
  s.waiting_cond[t].reset();
}

/// Hands `lock` to thread `t` if free, otherwise queues `t` behind it.
/// Returns true when granted.
bool request_lock(SchedulerState& s, std::size_t t, LockId lock) {
  auto& owner = s.lock_owners[lock.value];
  if (!owner) {
    owner = t;
    make_runnable(s, t);
    return true;
  }
  s.status[t] = ThreadStatus::BlockedOnLock;
  s.pending_lock[t] = lock;
  s.wake_times[t] = kNever;
  s.lock_waiters[lock.value].push_back(t);
  return false;
}

std::string release_lock(SchedulerState& s, std::size_t t, LockId lock, bool describe) {
  auto it = s.lock_owners.find(lock.value);
  if (it == s.lock_owners.end() || it->second != t)
    throw MalformedProgram("ReleaseWithoutOwnership: thread " + std::to_string(t) + " released lock " +
                           std::to_string(lock.value));
  auto wq = s.lock_waiters.find(lock.value);
  if (wq != s.lock_waiters.end() && !wq->second.empty()) {
    const std::size_t next = wq->second.front();
    wq->second.pop_front();
    if (wq->second.empty()) s.lock_waiters.erase(wq);
    it->second = next;
    make_runnable(s, next);
    if (!describe) return {};
    return "release(" + std::to_string(lock.value) + ")->T" + std::to_string(next);
  }
  it->second.reset();
  if (!describe) return {};
  return "release(" + std::to_string(lock.value) + ")";
}

}  // namespace

SchedulerState::SchedulerState(std::size_t thread_count)
    : wake_times(thread_count, 0.0),
      status(thread_count, ThreadStatus::Runnable),
      pending_lock(thread_count),
      waiting_cond(thread_count) {}

std::size_t SchedulerState::count(ThreadStatus s) const {
  return static_cast<std::size_t>(std::count(status.begin(), status.end(), s));
}

std::optional<std::size_t> SchedulerState::owner(LockId lock) const {
  auto it = lock_owners.find(lock.value);
  return it == lock_owners.end() ? std::nullopt : it->second;
}

std::size_t next_runnable(const SchedulerState& state) {
  std::optional<std::size_t> best;
  for (std::size_t t = 0; t < state.thread_count(); ++t) {
    if (state.status[t] != ThreadStatus::Runnable) continue;
    if (!best || state.wake_times[t] < state.wake_times[*best]) best = t;
  }
  if (!best) throw NoRunnable("no runnable thread");
  return *best;
}

std::string apply_yield(SchedulerState& s, std::size_t t, const YieldEvent& ev, bool describe) {
  struct Visitor {
    SchedulerState& s;
    std::size_t t;
    bool describe;

    std::string operator()(const event::Delay& d) const {
      if (!std::isfinite(d.duration)) throw MalformedProgram("non-finite delay");
      const bool clamped = d.duration < 0.0;
      s.wake_times[t] += clamped ? 0.0 : d.duration;
      if (!describe) return {};
      return "d=" + text::fixed(d.duration) + (clamped ? " clamped" : "");
    }
    std::string operator()(const event::AcquireLock& a) const {
      const auto prev = s.owner(a.lock);
      const bool granted = request_lock(s, t, a.lock);
      if (!describe) return {};
      if (granted) return "lock=" + std::to_string(a.lock.value) + " granted";
      return "lock=" + std::to_string(a.lock.value) + " blocked owner=T" + std::to_string(*prev);
    }
    std::string operator()(const event::CondWait& w) const {
      std::string note = describe ? "cv=" + std::to_string(w.cond.value) : std::string();
      if (w.held) {
        const std::string released = release_lock(s, t, *w.held, describe);
        if (describe) note += " " + released;
      }
      s.status[t] = ThreadStatus::WaitingOnCond;
      s.waiting_cond[t] = w.cond;
      s.pending_lock[t] = w.held;
      s.wake_times[t] = kNever;
      s.cv_waiters[w.cond.value].push_back(t);
      return note;
    }
    std::string operator()(const event::Done&) const {
      s.status[t] = ThreadStatus::Done;
      s.wake_times[t] = kNever;
      s.pending_lock[t].reset();
      s.waiting_cond[t].reset();
      return {};
    }
  };
  return std::visit(Visitor{s, t, describe}, ev);
}

std::string apply_effect(SchedulerState& s, std::size_t t, const SideEffect& fx, bool describe) {
  if (const auto* r = std::get_if<effect::Release>(&fx)) return release_lock(s, t, r->lock, describe);

  const auto& n = std::get<effect::Notify>(fx);
  const std::string tag =
      describe ? (n.all ? "notify_all(" : "notify_one(") + std::to_string(n.cond.value) + ")" : std::string();
  auto it = s.cv_waiters.find(n.cond.value);
  if (it == s.cv_waiters.end() || it->second.empty()) return describe ? tag + " lost" : tag;

  std::deque<std::size_t> woken;
  if (n.all) {
    woken.swap(it->second);
  } else {
    woken.push_back(it->second.front());
    it->second.pop_front();
  }
  if (it->second.empty()) s.cv_waiters.erase(it);

  std::string note = tag;
  for (std::size_t w : woken) {
    if (describe) note += "->T" + std::to_string(w);
    s.waiting_cond[w].reset();
    if (const auto lock = s.pending_lock[w])
      request_lock(s, w, *lock);
    else
      make_runnable(s, w);
  }
  return note;
}

}  // namespace bugamp
