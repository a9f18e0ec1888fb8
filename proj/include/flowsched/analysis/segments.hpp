#pragma once

#include <map>
#include <string>
#include <vector>

#include "flowsched/trace.hpp"

namespace flowsched {

struct JobSegment {
  std::vector<JobId> jobs;       // S
  std::vector<JobId> dominated;  // O_S
  std::vector<JobId> separated;  // S-bar: jobs of S that reach O \ O_S in the borrow graph
};

/// N(t) \ O(t) grouped by equal O_j, in order of increasing O_S.
struct SegmentPartition {
  std::vector<JobSegment> segments;
  std::map<JobId, Rational> truncated;                 // y-bar for N \ O and O
  std::map<JobId, std::vector<JobId>> dominated_by;    // O_j
  std::map<JobId, std::vector<JobId>> above_reachable; // O-bar_j
  bool strict_chain = true;
};

SegmentPartition compute_segments(const ScheduleTrace& alg, const ScheduleTrace& opt, const TimePoint& t);

struct LocalBoundsReport {
  std::size_t alive = 0;           // |A|
  std::size_t opt_alive = 0;       // |O|
  std::size_t alive_minus_opt = 0; // |A \ O|
  std::size_t nonclairvoyant_minus_opt = 0;
  std::size_t clairvoyant_minus_opt = 0;
  Rational factor;           // 1/(1-alpha), rounded up when not integral
  bool extrapolated = false; // factor was rounded up
  bool skipped = false;      // alpha = 1
  bool pass = true;
  std::vector<std::string> violations;
};

/// The three counting bounds, |A| <= (4 + 2c)|O| and O empty => A empty.
LocalBoundsReport check_local_bounds(const ScheduleTrace& alg, const ScheduleTrace& opt, const TimePoint& t,
                                     const Alpha& alpha);

}  // namespace flowsched
