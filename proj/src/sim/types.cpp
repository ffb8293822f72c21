#include "bugamp/sim/problem.hpp"
#include "bugamp/sim/types.hpp"

namespace bugamp {

std::string to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Pass: return "Pass";
    case OutcomeKind::BugTriggered: return "BugTriggered";
    case OutcomeKind::HorizonExceeded: return "HorizonExceeded";
  }
  return "?";
}

std::string to_string(BugKind kind) {
  switch (kind) {
    case BugKind::None: return "None";
    case BugKind::Assertion: return "Assertion";
    case BugKind::InvariantViolation: return "InvariantViolation";
    case BugKind::Deadlock: return "Deadlock";
  }
  return "?";
}

std::string describe(const TrialOutcome& outcome) {
  if (outcome.kind == OutcomeKind::BugTriggered) return "BugTriggered(" + to_string(outcome.bug) + ")";
  return to_string(outcome.kind);
}

std::string to_string(Effect e) {
  switch (e) {
    case Effect::Deadlock: return "Deadlock";
    case Effect::UnexpectedData: return "UnexpectedData";
    case Effect::ConcurrentAccess: return "ConcurrentAccess";
  }
  return "?";
}

std::string to_string(RootCause c) {
  switch (c) {
    case RootCause::MissingWeakGuard: return "MissingWeakGuard";
    case RootCause::NonAtomicOp: return "NonAtomicOp";
    case RootCause::IncorrectOrdering: return "IncorrectOrdering";
    case RootCause::MisuseOfPrimitives: return "MisuseOfPrimitives";
  }
  return "?";
}

}  // namespace bugamp
