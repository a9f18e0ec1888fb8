#pragma once

#include "flowsched/instance.hpp"

namespace flowsched::oracle {

/// Minimum total flow time over all preemptive schedules, found by exhaustive
/// search over unit-step schedules. Exact for instances with integer release
/// and processing times; throws Error otherwise. Meant for n <= 8 or so.
Rational brute_force_optimum(const Instance& instance);

}  // namespace flowsched::oracle
