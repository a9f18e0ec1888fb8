#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "flowsched/instance.hpp"

namespace flowsched {

/// Constant rate assignment on [start, end). Rates are sorted by job id.
struct ExecutionSegment {
  TimePoint start;
  TimePoint end;
  std::vector<std::pair<JobId, Rational>> rates;

  Rational rate_of(JobId id) const;
  Rational total_rate() const;
  bool idle() const { return rates.empty(); }

  friend bool operator==(const ExecutionSegment&, const ExecutionSegment&) = default;
};

/// Closed interval [lo, hi].
struct Interval {
  TimePoint lo;
  TimePoint hi;

  Duration length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Job sets at an instant: alive (A), non-clairvoyant (N), clairvoyant (C)
/// and completed (D). All sorted by id.
struct Partition {
  std::vector<JobId> alive;
  std::vector<JobId> non_clairvoyant;
  std::vector<JobId> clairvoyant;
  std::vector<JobId> done;
};

/// Ground-truth record of a schedule. Completions and emission times are
/// derived from the segments; every other quantity (y, p(t), A/N/C/D) is a
/// view computed from it.
///
/// Canonical form: zero-length segments dropped, adjacent segments with equal
/// rate maps merged, segments tile [0, makespan]. Two traces compare equal iff
/// their canonical forms match.
class ScheduleTrace {
 public:
  ScheduleTrace() = default;
  /// `instance` must be resolved. `commits` records when deferred processing
  /// times became known; emission cannot precede it. Throws Error on an
  /// infeasible schedule (overlaps, rate sum above 1, work beyond p_j, rate to
  /// an unreleased or finished job).
  ScheduleTrace(Instance instance, std::vector<ExecutionSegment> segments,
                std::map<JobId, TimePoint> commits = {});

  const Instance& instance() const { return instance_; }
  const std::vector<ExecutionSegment>& segments() const { return segments_; }
  const std::map<JobId, TimePoint>& completions() const { return completions_; }
  const std::map<JobId, TimePoint>& emissions() const { return emissions_; }
  const std::map<JobId, TimePoint>& commits() const { return commits_; }

  std::optional<TimePoint> completion(JobId id) const;
  std::optional<TimePoint> emission(JobId id) const;
  TimePoint makespan() const;
  bool all_completed() const { return completions_.size() == instance_.size(); }

  /// Sorted, de-duplicated segment boundaries, releases, completions and
  /// emissions.
  std::vector<TimePoint> event_times() const;

  Duration work(JobId id, const TimePoint& t) const;
  /// Rate job `id` receives on [t, t + eps).
  Rational rate_after(JobId id, const TimePoint& t) const;
  /// Index of the segment containing t in [start, end), if any.
  std::optional<std::size_t> segment_at(const TimePoint& t) const;

  friend bool operator==(const ScheduleTrace& a, const ScheduleTrace& b) {
    return a.instance_ == b.instance_ && a.segments_ == b.segments_ && a.commits_ == b.commits_;
  }

 private:
  struct Piece {
    TimePoint start;
    TimePoint end;
    Rational rate;
    Duration work_before;
  };

  Instance instance_;
  std::vector<ExecutionSegment> segments_;
  std::map<JobId, TimePoint> completions_;
  std::map<JobId, TimePoint> emissions_;
  std::map<JobId, TimePoint> commits_;
  std::map<JobId, std::vector<Piece>> pieces_;
};

/// y_j(t): processing received by job j up to time t.
Duration elapsed_work(const ScheduleTrace& trace, JobId j, const TimePoint& t);

/// p_j(t) = p_j - y_j(t). Throws Error("unresolved") if j's processing time
/// was still deferred at time t.
Duration remaining(const ScheduleTrace& trace, JobId j, const TimePoint& t);

/// True when job j's processing time was known at time t.
bool committed_at(const ScheduleTrace& trace, JobId j, const TimePoint& t);

Partition partition(const ScheduleTrace& trace, const TimePoint& t);

/// Union of lifetimes [r_j, min(C_j, t)] over `jobs`, as maximal disjoint
/// closed intervals in increasing order. Jobs released after t contribute
/// nothing. Throws on an empty job set.
std::vector<Interval> lifetime(const ScheduleTrace& trace, std::span<const JobId> jobs,
                               const TimePoint& t);

/// q_j(I) = y_j(hi) - y_j(lo).
Duration interval_work(const ScheduleTrace& trace, JobId j, const Interval& interval);

}  // namespace flowsched
