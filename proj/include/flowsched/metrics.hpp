#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowsched/io.hpp"
#include "flowsched/trace.hpp"

namespace flowsched {

/// |A(t)| as a right-continuous step function: value `count` on [start, next start).
struct DeltaStep {
  TimePoint start;
  std::size_t count = 0;
  friend bool operator==(const DeltaStep&, const DeltaStep&) = default;
};

struct MetricsReport {
  Rational total_flow;
  std::map<JobId, Rational> per_job_flow;  // completed jobs only
  TimePoint makespan;
  std::vector<DeltaStep> delta_curve;
  /// False when some job had not completed by the end of the trace; total_flow
  /// is then the flow accrued up to the makespan.
  bool complete = true;
};

/// Sum of (C_j - r_j), or the accrued integral of |A(t)| when incomplete.
Rational total_flow_time(const ScheduleTrace& trace);

/// Integral of |A(t)| over [0, makespan], from the step curve.
Rational integrated_alive(const ScheduleTrace& trace);

/// Integral of |A(t)| over [lo, hi].
Rational integrated_alive(const ScheduleTrace& trace, const TimePoint& lo, const TimePoint& hi);

std::vector<DeltaStep> delta_curve(const ScheduleTrace& trace);

/// Alive jobs at t; with a threshold, only those whose remaining work is at
/// least `min_remaining`. Throws Error("unresolved") if a threshold is given
/// and an alive job's processing time was not yet committed at t.
std::size_t delta(const ScheduleTrace& trace, const TimePoint& t,
                  const std::optional<Duration>& min_remaining = std::nullopt);

MetricsReport metrics(const ScheduleTrace& trace);

/// alg.total_flow / opt.total_flow. Throws on a zero denominator.
Rational ratio(const MetricsReport& alg, const MetricsReport& opt);

Json metrics_to_json(const MetricsReport& report, bool with_float = false);

/// Flat CSV row set: instance_id,policy,alpha,total_flow,ratio.
struct MetricsRow {
  std::string instance_id;
  std::string policy;
  Rational alpha;
  Rational total_flow;
  Rational ratio;
};
std::string metrics_csv(const std::vector<MetricsRow>& rows, bool with_float = false);

}  // namespace flowsched
