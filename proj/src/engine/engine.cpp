#include "flowsched/engine.hpp"

#include <algorithm>
#include <sstream>

namespace flowsched {

std::string event_log_csv(const EventLog& log) {
  std::ostringstream out;
  out << "time,kind,job_ids\n";
  for (const auto& e : log) {
    out << to_string(e.time) << ',' << event_kind_name(e.kind) << ',';
    for (std::size_t i = 0; i < e.jobs.size(); ++i) {
      if (i > 0) out << ';';
      out << e.jobs[i];
    }
    out << '\n';
  }
  return out.str();
}

EngineState::EngineState(const Instance& instance) : instance_(&instance), now_(0) {
  jobs_.reserve(instance.size());
  for (const auto& j : instance.jobs()) {
    JobState s;
    s.id = j.id;
    s.release = j.release;
    if (j.committed()) {
      s.proc = j.processing();
    } else {
      s.trigger = std::get<Deferred>(j.proc).trigger;
    }
    s.work = 0;
    jobs_.push_back(std::move(s));
  }
}

const EngineState::JobState& EngineState::job(JobId id) const {
  for (const auto& j : jobs_) {
    if (j.id == id) return j;
  }
  throw Error("unknown job id " + std::to_string(id));
}

EngineState::JobState& EngineState::job_mut(JobId id) {
  return const_cast<JobState&>(std::as_const(*this).job(id));
}

void EngineState::emit_ready(EventLog& log) {
  const Rational& alpha = instance_->alpha().value();
  std::vector<JobId> emitted;
  for (auto& j : jobs_) {
    if (!j.released || !j.proc || j.emitted_at) continue;
    if (j.work >= alpha * *j.proc) {
      j.emitted_at = now_;
      emitted.push_back(j.id);
    }
  }
  if (!emitted.empty()) {
    std::sort(emitted.begin(), emitted.end());
    log.push_back({now_, EventKind::kEmission, std::move(emitted)});
  }
}

void EngineState::settle(EventLog& log) {
  std::vector<JobId> done;
  for (auto& j : jobs_) {
    if (j.alive() && j.proc && j.work == *j.proc) {
      j.completed_at = now_;
      done.push_back(j.id);
    }
  }
  if (!done.empty()) {
    std::sort(done.begin(), done.end());
    log.push_back({now_, EventKind::kCompletion, std::move(done)});
  }
  emit_ready(log);

  if (const auto& script = instance_->adversary()) {
    const Alpha& alpha = instance_->alpha();
    while (next_trigger_index_ < script->triggers.size() &&
           script->triggers[next_trigger_index_].fire_at <= now_) {
      const Trigger& trigger = script->triggers[next_trigger_index_++];
      std::vector<std::pair<JobId, Duration>> observed;
      for (const auto& j : jobs_) {
        if (!j.proc && j.trigger == trigger.id) observed.emplace_back(j.id, j.work);
      }
      std::sort(observed.begin(), observed.end());
      if (observed.empty()) continue;
      std::vector<JobId> committed;
      for (const auto& [id, p] : apply_commit_rule(trigger.rule, alpha, observed)) {
        JobState& j = job_mut(id);
        if (p <= 0 || alpha.value() * p < j.work) {
          throw Error("inconsistent commitment: job " + std::to_string(id) + " committed to " +
                      to_string(p) + " after receiving " + to_string(j.work) + " at " + to_string(now_));
        }
        j.proc = p;
        j.committed_at = now_;
        committed.push_back(id);
      }
      log.push_back({now_, EventKind::kAdversaryCommit, std::move(committed)});
    }
    emit_ready(log);
  }

  std::vector<JobId> arrived;
  while (next_release_index_ < jobs_.size() && jobs_[next_release_index_].release <= now_) {
    jobs_[next_release_index_].released = true;
    arrived.push_back(jobs_[next_release_index_].id);
    ++next_release_index_;
  }
  if (!arrived.empty()) {
    std::sort(arrived.begin(), arrived.end());
    log.push_back({now_, EventKind::kArrival, std::move(arrived)});
    emit_ready(log);
  }
}

void EngineState::advance(const TimePoint& until, const RateDecision& decision) {
  const Duration span = until - now_;
  for (const auto& [id, rate] : decision.rates) {
    JobState& j = job_mut(id);
    j.work += rate * span;
    if (j.proc && j.work > *j.proc) {
      throw Error("engine overshoot: job " + std::to_string(id) + " processed beyond its size");
    }
  }
  now_ = until;
}

PolicyView EngineState::view(bool omniscient) const {
  PolicyView v;
  v.now = now_;
  for (const auto& j : jobs_) {
    if (!j.alive()) continue;
    JobView jv;
    jv.id = j.id;
    jv.release = j.release;
    jv.elapsed = j.work;
    jv.emitted = j.emitted_at.has_value();
    jv.emitted_at = j.emitted_at;
    if (jv.emitted || omniscient) {
      if (!j.proc) {
        throw Error("unresolved: omniscient policy needs the processing time of job " +
                    std::to_string(j.id));
      }
      jv.remaining = *j.proc - j.work;
    }
    v.alive.push_back(std::move(jv));
  }
  std::sort(v.alive.begin(), v.alive.end(),
            [](const JobView& a, const JobView& b) { return a.id < b.id; });
  return v;
}

void EngineState::check_decision(const RateDecision& decision) const {
  Rational sum = 0;
  for (std::size_t i = 0; i < decision.rates.size(); ++i) {
    const auto& [id, rate] = decision.rates[i];
    if (i > 0 && !(decision.rates[i - 1].first < id)) {
      throw Error("decision rates must be sorted by unique job id");
    }
    if (rate <= 0) throw Error("decision contains a non-positive rate");
    if (!job(id).alive()) throw Error("decision rates job " + std::to_string(id) + " which is not alive");
    sum += rate;
  }
  if (sum > 1) throw Error("decision rates sum above 1");
}

bool EngineState::finished() const {
  return std::all_of(jobs_.begin(), jobs_.end(),
                     [](const JobState& j) { return j.completed_at.has_value(); });
}

std::optional<TimePoint> EngineState::next_arrival() const {
  if (next_release_index_ < jobs_.size()) return jobs_[next_release_index_].release;
  return std::nullopt;
}

std::optional<TimePoint> EngineState::next_trigger() const {
  const auto& script = instance_->adversary();
  if (script && next_trigger_index_ < script->triggers.size()) {
    return script->triggers[next_trigger_index_].fire_at;
  }
  return std::nullopt;
}

std::optional<PendingEvent> next_event(const EngineState& state, const Policy& policy,
                                       const PolicyView& view, const RateDecision& decision) {
  std::optional<PendingEvent> best;
  std::vector<JobId> change_jobs;
  auto offer = [&](const TimePoint& t, EventKind kind) {
    if (!best || t < best->time) {
      best = PendingEvent{t, {kind}, {}};
    } else if (t == best->time &&
               std::find(best->kinds.begin(), best->kinds.end(), kind) == best->kinds.end()) {
      best->kinds.push_back(kind);
    }
  };

  if (auto t = state.next_arrival()) offer(*t, EventKind::kArrival);
  if (auto t = state.next_trigger()) offer(*t, EventKind::kAdversaryCommit);

  const Rational& alpha = state.instance().alpha().value();
  for (const auto& [id, rate] : decision.rates) {
    const auto& j = state.job(id);
    if (!j.proc) continue;
    if (!j.emitted_at) {
      const Duration target = alpha * *j.proc;
      if (j.work < target) offer(TimePoint(state.now() + (target - j.work) / rate), EventKind::kEmission);
    }
    offer(TimePoint(state.now() + (*j.proc - j.work) / rate), EventKind::kCompletion);
  }

  if (auto change = policy.next_change(view, decision)) {
    if (change->after <= 0) throw Error("policy reported a non-positive change interval");
    const TimePoint t = state.now() + change->after;
    offer(t, change->kind);
    if (best && best->time == t) change_jobs = change->jobs;
  }
  if (best) {
    std::sort(best->kinds.begin(), best->kinds.end());
    best->change_jobs = std::move(change_jobs);
  }
  return best;
}

SimulationResult simulate(const Instance& instance, const Policy& policy,
                          std::optional<TimePoint> horizon) {
  EngineState state(instance);
  EventLog log;
  std::vector<ExecutionSegment> segments;
  const std::size_t n = std::max<std::size_t>(instance.size(), 1);
  const std::size_t cap = 64 * n * n;
  std::size_t steps = 0;
  std::vector<Event> pending_changes;

  while (true) {
    state.settle(log);
    for (auto& e : pending_changes) log.push_back(std::move(e));
    pending_changes.clear();
    if (horizon && state.now() >= *horizon) break;
    if (state.finished()) break;
    if (++steps > cap) {
      throw Error("runaway event loop: more than " + std::to_string(cap) + " events");
    }

    const PolicyView view = state.view(policy.omniscient());
    const RateDecision decision = policy.decide(view);
    state.check_decision(decision);
    auto ev = next_event(state, policy, view, decision);
    if (!ev) throw Error("policy stalled at t = " + to_string(state.now()));

    TimePoint until = ev->time;
    const bool capped = horizon && *horizon < until;
    if (capped) until = *horizon;
    segments.push_back({state.now(), until, decision.rates});
    state.advance(until, decision);
    if (!capped) {
      for (EventKind k : ev->kinds) {
        if (k == EventKind::kMerge || k == EventKind::kModeSwitch) {
          pending_changes.push_back({until, k, ev->change_jobs});
        }
      }
    }
  }

  std::map<JobId, Duration> values;
  std::map<JobId, TimePoint> commit_times;
  for (const auto& j : state.jobs()) {
    if (!j.proc) {
      throw Error("unresolved: deferred job " + std::to_string(j.id) + " has no commitment before the horizon");
    }
    if (j.committed_at) {
      values[j.id] = *j.proc;
      commit_times[j.id] = *j.committed_at;
    }
  }
  ScheduleTrace trace(instance.realized(values), std::move(segments), std::move(commit_times));
  return {std::move(trace), std::move(log)};
}

namespace {

std::string describe(const ExecutionSegment& s) {
  std::ostringstream out;
  out << '[' << to_string(s.start) << ", " << to_string(s.end) << ") {";
  for (std::size_t i = 0; i < s.rates.size(); ++i) {
    if (i > 0) out << ", ";
    out << s.rates[i].first << ':' << to_string(s.rates[i].second);
  }
  out << '}';
  return out.str();
}

}  // namespace

ReplayReport replay_check(const ScheduleTrace& trace, const Instance& instance, const Policy& policy) {
  std::optional<TimePoint> horizon;
  if (!trace.all_completed()) horizon = trace.makespan();
  SimulationResult again;
  try {
    again = simulate(instance, policy, horizon);
  } catch (const Error& e) {
    return {false, std::string("re-simulation failed: ") + e.what()};
  }
  if (again.trace == trace) return {};

  const auto& want = again.trace.segments();
  const auto& got = trace.segments();
  for (std::size_t i = 0; i < std::max(want.size(), got.size()); ++i) {
    if (i >= want.size()) return {false, "extra segment " + describe(got[i])};
    if (i >= got.size()) return {false, "missing segment " + describe(want[i])};
    if (!(want[i] == got[i])) {
      return {false, "segment " + std::to_string(i) + ": expected " + describe(want[i]) + ", got " +
                         describe(got[i])};
    }
  }
  if (!(again.trace.instance() == trace.instance())) return {false, "realized instances differ"};
  return {false, "commit times differ"};
}

}  // namespace flowsched
