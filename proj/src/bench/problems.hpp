#pragma once

#include "bugamp/bench/routines.hpp"
#include "bugamp/sim/problem.hpp"

#include <initializer_list>
#include <string>

namespace bugamp::bench::detail {

/// Spec with unit bounds, "C" plus the given delay labels.
ProblemSpec skeleton(std::string name, std::initializer_list<const char*> delay_labels);

ParamVector vec(std::initializer_list<double> values);

ProblemSpec atomicity_bypass();
ProblemSpec broken_barrier();
ProblemSpec broken_peterson();
ProblemSpec delayed_write();
ProblemSpec flagged_deadlock();
ProblemSpec if_not_while();
ProblemSpec lock_order_inversion();
ProblemSpec lost_signal();
ProblemSpec partial_lock();
ProblemSpec phantom_permit();
ProblemSpec race_to_wait();
ProblemSpec racy_increment();
ProblemSpec semaphore_leak();
ProblemSpec shared_counter();
ProblemSpec shared_flag();
ProblemSpec signal_then_wait();
ProblemSpec sleeping_guard();

}  // namespace bugamp::bench::detail
