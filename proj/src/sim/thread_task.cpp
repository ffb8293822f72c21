#include "bugamp/sim/thread_task.hpp"

namespace bugamp {

YieldEvent ThreadTask::resume() {
  if (finished()) throw MalformedProgram("thread stepped after Done");
  auto& promise = handle_.promise();
  promise.leaf.resume();
  if (promise.error) std::rethrow_exception(std::exchange(promise.error, nullptr));
  if (handle_.done()) return event::Done{};
  return promise.current;
}

event::Delay ThreadContext::pause(std::size_t slot) { return pause(slot, 1.0); }

event::Delay ThreadContext::pause(std::size_t slot, double factor) {
  const double c = params_[0];
  const double d = params_[static_cast<Eigen::Index>(slot)];
  return {c * d * factor + distortion(noise_, noise_scale_ * c)};
}

}  // namespace bugamp
