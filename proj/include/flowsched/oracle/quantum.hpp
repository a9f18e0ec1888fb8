#pragma once

#include "flowsched/policy.hpp"
#include "flowsched/trace.hpp"

namespace flowsched::oracle {

/// Time-stepped reference simulator. Rates are chosen at the start of each
/// quantum of length h and held until the quantum ends, a job arrives or a
/// running job completes, whichever is first. The three rules are written
/// directly from their definitions and share no code with the event engine.
/// `instance` must be resolved.
ScheduleTrace simulate_quantum(const Instance& instance, PolicyKind policy, const Rational& h);

}  // namespace flowsched::oracle
