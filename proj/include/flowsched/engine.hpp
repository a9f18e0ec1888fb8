#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowsched/instance.hpp"
#include "flowsched/policy.hpp"
#include "flowsched/trace.hpp"

namespace flowsched {

struct Event {
  TimePoint time;
  EventKind kind = EventKind::kArrival;
  std::vector<JobId> jobs;

  friend bool operator==(const Event&, const Event&) = default;
};

using EventLog = std::vector<Event>;

/// CSV with columns time,kind,job_ids (ids separated by ';').
std::string event_log_csv(const EventLog& log);

/// Mutable state of one run: the jobs' progress and what has been revealed.
class EngineState {
 public:
  struct JobState {
    JobId id = 0;
    TimePoint release;
    std::optional<Duration> proc;
    std::optional<TriggerId> trigger;
    Duration work;
    bool released = false;
    std::optional<TimePoint> emitted_at;
    std::optional<TimePoint> completed_at;
    std::optional<TimePoint> committed_at;

    bool alive() const { return released && !completed_at; }
  };

  explicit EngineState(const Instance& instance);

  const TimePoint& now() const { return now_; }
  const Instance& instance() const { return *instance_; }
  const std::vector<JobState>& jobs() const { return jobs_; }
  const JobState& job(JobId id) const;

  /// Applies everything that happens at now(): completions, emissions,
  /// adversary commits, arrivals, in that order. Appends to `log`.
  void settle(EventLog& log);
  /// Moves time forward to `until`, processing at the given rates.
  void advance(const TimePoint& until, const RateDecision& decision);

  /// View handed to a policy. Throws if an omniscient view is requested
  /// while some alive job is still uncommitted.
  PolicyView view(bool omniscient) const;
  void check_decision(const RateDecision& decision) const;

  bool finished() const;
  std::optional<TimePoint> next_arrival() const;
  std::optional<TimePoint> next_trigger() const;

 private:
  JobState& job_mut(JobId id);
  void emit_ready(EventLog& log);

  const Instance* instance_;
  TimePoint now_;
  std::vector<JobState> jobs_;  // instance order: (release, id)
  std::size_t next_release_index_ = 0;
  std::size_t next_trigger_index_ = 0;
};

struct PendingEvent {
  TimePoint time;
  std::vector<EventKind> kinds;  // all kinds due at `time`
  std::vector<JobId> change_jobs;
};

/// Earliest upcoming event given the current decision: next arrival, adversary
/// trigger, emission or completion of a rated job, or a policy change (level
/// merge, threshold crossing). Empty when nothing is pending.
std::optional<PendingEvent> next_event(const EngineState& state, const Policy& policy,
                                       const PolicyView& view, const RateDecision& decision);

struct SimulationResult {
  ScheduleTrace trace;
  EventLog events;
};

/// Runs `policy` on `instance` under the alpha-clairvoyant information model
/// (alpha taken from the instance). Without a horizon the run ends once every
/// job has completed. Throws Error on an inconsistent adversary commitment,
/// a stalled policy, or more than 64 n^2 events.
SimulationResult simulate(const Instance& instance, const Policy& policy,
                          std::optional<TimePoint> horizon = std::nullopt);

struct ReplayReport {
  bool matches = true;
  std::string divergence;
  explicit operator bool() const { return matches; }
};

/// Re-simulates and compares canonical traces segment by segment.
ReplayReport replay_check(const ScheduleTrace& trace, const Instance& instance, const Policy& policy);

}  // namespace flowsched
