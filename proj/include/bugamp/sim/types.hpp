#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace bugamp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class MalformedProgram : public Error {
public:
  using Error::Error;
};

class BoundsViolation : public Error {
public:
  using Error::Error;
};

class NoRunnable : public Error {
public:
  using Error::Error;
};

/// Logical clock value. Never related to wall-clock time.
using VirtualTime = double;

inline constexpr VirtualTime kNever = std::numeric_limits<VirtualTime>::infinity();

/// A point in the delay-parameter space. Slot 0 is the global speed
/// coefficient C, the remaining slots are the per-operation delays D_i.
using ParamVector = Eigen::VectorXd;

/// Per-dimension closed box [lo_j, hi_j].
struct Bounds {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  static Bounds unit(std::size_t dim) {
    return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)),
            Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim))};
  }

  std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }

  bool contains(const ParamVector& x) const {
    if (x.size() != lo.size()) return false;
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }

  ParamVector clamp(const ParamVector& x) const {
    return x.cwiseMax(lo).cwiseMin(hi);
  }

  Eigen::VectorXd width() const { return hi - lo; }
};

struct LockId {
  std::uint32_t value = 0;
  friend bool operator==(LockId, LockId) = default;
};

struct CondId {
  std::uint32_t value = 0;
  friend bool operator==(CondId, CondId) = default;
};

namespace event {

struct Delay {
  VirtualTime duration = 0.0;
};

struct AcquireLock {
  LockId lock;
};

/// Wait on a condition variable, releasing `held` first if supplied. The lock
/// is re-acquired before the waiter resumes.
struct CondWait {
  CondId cond;
  std::optional<LockId> held;
};

struct Done {};

}  // namespace event

using YieldEvent = std::variant<event::Delay, event::AcquireLock, event::CondWait, event::Done>;

/// Side effects a thread may perform inside a step, applied in order before
/// its yielded event.
namespace effect {

struct Release {
  LockId lock;
};

struct Notify {
  CondId cond;
  bool all = true;
};

}  // namespace effect

using SideEffect = std::variant<effect::Release, effect::Notify>;

enum class OutcomeKind : std::uint8_t { Pass, BugTriggered, HorizonExceeded };
enum class BugKind : std::uint8_t { None, Assertion, InvariantViolation, Deadlock };

struct TrialOutcome {
  OutcomeKind kind = OutcomeKind::Pass;
  BugKind bug = BugKind::None;
  VirtualTime final_time = 0.0;
  std::uint64_t steps = 0;

  bool is_bug() const { return kind == OutcomeKind::BugTriggered; }
  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

std::string to_string(OutcomeKind kind);
std::string to_string(BugKind kind);
/// "Pass", "HorizonExceeded" or "BugTriggered(Deadlock)" style label.
std::string describe(const TrialOutcome& outcome);

}  // namespace bugamp
