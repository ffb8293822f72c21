#pragma once

#include "bugamp/sim/noise.hpp"
#include "bugamp/sim/shared_store.hpp"
#include "bugamp/sim/types.hpp"

#include <coroutine>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bugamp {

/// Resumable thread body. A thread program is a C++ coroutine that performs a
/// batch of atomic actions on shared state and then `co_yield`s the next
/// scheduling event. Returning from the outermost coroutine yields Done.
///
/// Bodies may `co_await` another ThreadTask; the callee's yields surface at
/// the outermost task as if written inline.
class ThreadTask {
public:
  struct promise_type {
    YieldEvent current = event::Done{};
    std::exception_ptr error;
    promise_type* root = this;
    std::coroutine_handle<promise_type> parent;
    std::coroutine_handle<promise_type> leaf;  // innermost active frame; root only

    ThreadTask get_return_object() {
      auto h = std::coroutine_handle<promise_type>::from_promise(*this);
      leaf = h;
      return ThreadTask{h};
    }
    std::suspend_always initial_suspend() noexcept { return {}; }

    struct FinalAwaiter {
      bool await_ready() noexcept { return false; }
      std::coroutine_handle<> await_suspend(std::coroutine_handle<promise_type> h) noexcept {
        auto& p = h.promise();
        if (p.parent) {
          p.root->leaf = p.parent;
          return p.parent;
        }
        return std::noop_coroutine();
      }
      void await_resume() noexcept {}
    };
    FinalAwaiter final_suspend() noexcept { return {}; }

    std::suspend_always yield_value(YieldEvent ev) noexcept {
      root->current = std::move(ev);
      return {};
    }
    void return_void() noexcept {}
    void unhandled_exception() noexcept { error = std::current_exception(); }
  };

  ThreadTask() = default;
  ThreadTask(ThreadTask&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  ThreadTask& operator=(ThreadTask&& other) noexcept {
    if (this != &other) {
      reset();
      handle_ = std::exchange(other.handle_, {});
    }
    return *this;
  }
  ThreadTask(const ThreadTask&) = delete;
  ThreadTask& operator=(const ThreadTask&) = delete;
  ~ThreadTask() { reset(); }

  /// Runs the body up to its next yield. Throws MalformedProgram when called
  /// after the body finished.
  YieldEvent resume();

  bool finished() const { return !handle_ || handle_.done(); }

  struct Awaiter {
    std::coroutine_handle<promise_type> child;

    bool await_ready() const noexcept { return !child || child.done(); }
    std::coroutine_handle<> await_suspend(std::coroutine_handle<promise_type> caller) noexcept {
      auto& cp = child.promise();
      cp.parent = caller;
      cp.root = caller.promise().root;
      cp.root->leaf = child;
      return child;
    }
    void await_resume() {
      if (child && child.promise().error) std::rethrow_exception(child.promise().error);
    }
  };

  /// Runs a sub-routine inline.
  Awaiter operator co_await() && noexcept { return Awaiter{handle_}; }

private:
  explicit ThreadTask(std::coroutine_handle<promise_type> h) : handle_(h) {}
  void reset() {
    if (handle_) handle_.destroy();
    handle_ = {};
  }

  std::coroutine_handle<promise_type> handle_;
};

/// Everything a thread body may touch during a step. Owned by the trial and
/// outlives every coroutine that references it.
class ThreadContext {
public:
  ThreadContext(std::size_t index, SharedStore& store, const ParamVector& params, NoiseSource& noise,
                double noise_scale, const VirtualTime& clock)
      : index_(index), store_(store), params_(params), noise_(noise), noise_scale_(noise_scale),
        clock_(clock) {}

  std::size_t index() const { return index_; }

  /// Read-only view of the scheduler's lock table, for try-lock probes.
  void bind_lock_table(std::function<std::optional<std::size_t>(LockId)> query) { lock_query_ = std::move(query); }
  std::optional<std::size_t> owner_of(LockId lock) const { return lock_query_ ? lock_query_(lock) : std::nullopt; }
  SharedStore& store() { return store_; }
  const ParamVector& params() const { return params_; }
  VirtualTime now() const { return clock_; }

  /// The global speed coefficient C (slot 0).
  double speed() const { return params_[0]; }

  /// Delay of C * D_slot plus distortion with amplitude noise_scale * C.
  event::Delay pause(std::size_t slot);

  /// Delay of C * D_slot * factor plus one distortion draw.
  event::Delay pause(std::size_t slot, double factor);

  event::AcquireLock acquire(LockId lock) const { return {lock}; }
  event::CondWait wait(CondId cond, LockId held) const { return {cond, held}; }
  event::CondWait wait(CondId cond) const { return {cond, std::nullopt}; }

  void release(LockId lock) { effects_.push_back(effect::Release{lock}); }
  void notify_all(CondId cond) { effects_.push_back(effect::Notify{cond, true}); }
  void notify_one(CondId cond) { effects_.push_back(effect::Notify{cond, false}); }

  /// Marks an assertion failure; the trial ends as BugTriggered(Assertion)
  /// once the current step completes.
  void fail(std::string what) {
    if (!failed_) failure_ = std::move(what);
    failed_ = true;
  }
  void check(bool condition, const char* what) {
    if (!condition) fail(what);
  }

  bool failed() const { return failed_; }
  const std::string& failure() const { return failure_; }

  std::vector<SideEffect> take_effects() { return std::exchange(effects_, {}); }

private:
  std::size_t index_;
  SharedStore& store_;
  const ParamVector& params_;
  NoiseSource& noise_;
  double noise_scale_;
  const VirtualTime& clock_;
  std::vector<SideEffect> effects_;
  std::function<std::optional<std::size_t>(LockId)> lock_query_;
  bool failed_ = false;
  std::string failure_;
};

/// Factory for a thread instance bound to a context.
using ThreadProgram = std::function<ThreadTask(ThreadContext&)>;

}  // namespace bugamp
