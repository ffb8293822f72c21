#include "bugamp/bench/routines.hpp"

namespace bugamp::bench {

ThreadTask work(ThreadContext& ctx, std::size_t slot, int n, double factor) {
  for (int i = 0; i < n; ++i) co_yield ctx.pause(slot, factor);
}

ThreadTask spin_acquire(ThreadContext& ctx, Slot flag, std::size_t slot, double factor) {
  while (true) {
    co_yield ctx.pause(slot, factor);
    if (ctx.store()[flag] == 0) break;
  }
  co_yield ctx.pause(slot, factor);
  ctx.store()[flag] = 1;
}

ThreadTask spin_wait(ThreadContext& ctx, CondId cond, Slot flag, std::size_t slot, double factor) {
  ctx.store()[flag] = 0;
  co_yield ctx.pause(slot, factor);
  co_yield ctx.wait(cond);
  co_await spin_acquire(ctx, flag, slot);
}

ThreadTask semaphore_wait(ThreadContext& ctx, Semaphore sem) {
  co_yield ctx.acquire(sem.lock);
  while (ctx.store()[sem.count] == 0) co_yield ctx.wait(sem.cond, sem.lock);
  --ctx.store()[sem.count];
  ctx.release(sem.lock);
}

ThreadTask semaphore_release(ThreadContext& ctx, Semaphore sem) {
  co_yield ctx.acquire(sem.lock);
  ++ctx.store()[sem.count];
  ctx.notify_all(sem.cond);
  ctx.release(sem.lock);
}

ThreadTask semaphore_wait_for(ThreadContext& ctx, Semaphore sem, double timeout, std::size_t poll_slot,
                              bool* acquired) {
  const VirtualTime deadline = ctx.now() + timeout;
  *acquired = false;
  while (true) {
    co_yield ctx.acquire(sem.lock);
    if (ctx.store()[sem.count] > 0) {
      --ctx.store()[sem.count];
      ctx.release(sem.lock);
      *acquired = true;
      co_return;
    }
    ctx.release(sem.lock);
    if (ctx.now() >= deadline) co_return;
    co_yield ctx.pause(poll_slot);
  }
}

ThreadTask signal_and_wait(ThreadContext& ctx, Barrier b) {
  co_yield ctx.acquire(b.lock);
  auto& s = ctx.store();
  if (++s[b.arrived] == b.parties) {
    s[b.arrived] = 0;
    ++s[b.phase];
    ctx.notify_all(b.cond);
  } else {
    const auto phase = s[b.phase];
    while (s[b.phase] == phase) co_yield ctx.wait(b.cond, b.lock);
  }
  ctx.release(b.lock);
}

}  // namespace bugamp::bench
