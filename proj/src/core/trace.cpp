#include "flowsched/trace.hpp"

#include <algorithm>
#include <set>

namespace flowsched {

Rational ExecutionSegment::rate_of(JobId id) const {
  auto it = std::lower_bound(rates.begin(), rates.end(), id,
                             [](const auto& entry, JobId key) { return entry.first < key; });
  if (it != rates.end() && it->first == id) return it->second;
  return 0;
}

Rational ExecutionSegment::total_rate() const {
  Rational sum = 0;
  for (const auto& [id, rate] : rates) sum += rate;
  return sum;
}

namespace {

std::vector<ExecutionSegment> canonicalize(const Instance& instance,
                                           std::vector<ExecutionSegment> raw) {
  std::vector<ExecutionSegment> out;
  TimePoint cursor = 0;
  for (auto& seg : raw) {
    if (seg.end < seg.start) throw Error("segment ends before it starts");
    if (seg.start < cursor) throw Error("overlapping segments at " + to_string(seg.start));
    if (seg.start == seg.end) continue;
    if (cursor < seg.start) out.push_back({cursor, seg.start, {}});

    std::sort(seg.rates.begin(), seg.rates.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<JobId, Rational>> rates;
    Rational sum = 0;
    for (auto& [id, rate] : seg.rates) {
      if (!instance.contains(id)) throw Error("segment rates unknown job id " + std::to_string(id));
      if (rate < 0) throw Error("negative rate for job " + std::to_string(id));
      if (!rates.empty() && rates.back().first == id) {
        throw Error("job " + std::to_string(id) + " listed twice in one segment");
      }
      if (rate == 0) continue;
      sum += rate;
      rates.emplace_back(id, rate);
    }
    if (sum > 1) throw Error("rates sum above 1 on [" + to_string(seg.start) + ", " + to_string(seg.end) + ")");
    seg.rates = std::move(rates);

    if (!out.empty() && out.back().end == seg.start && out.back().rates == seg.rates) {
      out.back().end = seg.end;
    } else {
      out.push_back(std::move(seg));
    }
    cursor = out.back().end;
  }
  return out;
}

}  // namespace

ScheduleTrace::ScheduleTrace(Instance instance, std::vector<ExecutionSegment> segments,
                             std::map<JobId, TimePoint> commits)
    : instance_(std::move(instance)), commits_(std::move(commits)) {
  if (!instance_.resolved()) throw Error("unresolved: a trace needs committed processing times");
  for (const auto& [id, t] : commits_) instance_.job(id);
  segments_ = canonicalize(instance_, std::move(segments));

  std::map<JobId, Duration> work;
  for (const auto& seg : segments_) {
    const Duration len = seg.end - seg.start;
    for (const auto& [id, rate] : seg.rates) {
      const Job& job = instance_.job(id);
      if (job.release > seg.start) {
        throw Error("job " + std::to_string(id) + " rated before its release at " + to_string(seg.start));
      }
      Duration& y = work[id];
      if (completions_.count(id)) {
        throw Error("job " + std::to_string(id) + " rated after completion at " + to_string(seg.start));
      }
      pieces_[id].push_back({seg.start, seg.end, rate, y});
      y += rate * len;
      if (y > job.processing()) {
        throw Error("job " + std::to_string(id) + " receives more than its processing time");
      }
      if (y == job.processing()) completions_[id] = seg.end;
    }
  }

  const TimePoint end = makespan();
  const Rational& alpha = instance_.alpha().value();
  for (const auto& job : instance_.jobs()) {
    const Duration target = alpha * job.processing();
    std::optional<TimePoint> reached;
    if (target == 0) {
      reached = job.release;
    } else if (auto it = pieces_.find(job.id); it != pieces_.end()) {
      for (const auto& piece : it->second) {
        const Duration after = piece.work_before + piece.rate * (piece.end - piece.start);
        if (piece.work_before < target && target <= after) {
          reached = piece.start + (target - piece.work_before) / piece.rate;
          break;
        }
      }
    }
    if (!reached) continue;
    TimePoint s = *reached;
    if (auto c = commits_.find(job.id); c != commits_.end() && s < c->second) s = c->second;
    if (s <= end || segments_.empty()) emissions_[job.id] = s;
  }
}

std::optional<TimePoint> ScheduleTrace::completion(JobId id) const {
  instance_.job(id);
  auto it = completions_.find(id);
  if (it == completions_.end()) return std::nullopt;
  return it->second;
}

std::optional<TimePoint> ScheduleTrace::emission(JobId id) const {
  instance_.job(id);
  auto it = emissions_.find(id);
  if (it == emissions_.end()) return std::nullopt;
  return it->second;
}

TimePoint ScheduleTrace::makespan() const {
  return segments_.empty() ? TimePoint(0) : segments_.back().end;
}

std::vector<TimePoint> ScheduleTrace::event_times() const {
  std::set<TimePoint> times;
  times.insert(TimePoint(0));
  for (const auto& seg : segments_) {
    times.insert(seg.start);
    times.insert(seg.end);
  }
  for (const auto& job : instance_.jobs()) times.insert(job.release);
  for (const auto& [id, t] : completions_) times.insert(t);
  for (const auto& [id, t] : emissions_) times.insert(t);
  return {times.begin(), times.end()};
}

Duration ScheduleTrace::work(JobId id, const TimePoint& t) const {
  instance_.job(id);
  auto it = pieces_.find(id);
  if (it == pieces_.end()) return 0;
  const auto& pieces = it->second;
  auto after = std::upper_bound(pieces.begin(), pieces.end(), t,
                                [](const TimePoint& key, const Piece& p) { return key < p.start; });
  if (after == pieces.begin()) return 0;
  const Piece& p = *std::prev(after);
  const TimePoint& upto = t < p.end ? t : p.end;
  return p.work_before + p.rate * (upto - p.start);
}

std::optional<std::size_t> ScheduleTrace::segment_at(const TimePoint& t) const {
  auto after = std::upper_bound(segments_.begin(), segments_.end(), t,
                                [](const TimePoint& key, const ExecutionSegment& s) { return key < s.start; });
  if (after == segments_.begin()) return std::nullopt;
  auto idx = static_cast<std::size_t>(std::distance(segments_.begin(), after) - 1);
  if (t < segments_[idx].end) return idx;
  return std::nullopt;
}

Rational ScheduleTrace::rate_after(JobId id, const TimePoint& t) const {
  auto idx = segment_at(t);
  if (!idx) return 0;
  return segments_[*idx].rate_of(id);
}

Duration elapsed_work(const ScheduleTrace& trace, JobId j, const TimePoint& t) {
  return trace.work(j, t);
}

bool committed_at(const ScheduleTrace& trace, JobId j, const TimePoint& t) {
  trace.instance().job(j);
  auto it = trace.commits().find(j);
  return it == trace.commits().end() || it->second <= t;
}

Duration remaining(const ScheduleTrace& trace, JobId j, const TimePoint& t) {
  if (!committed_at(trace, j, t)) {
    throw Error("unresolved: processing time of job " + std::to_string(j) + " not committed at " +
                to_string(t));
  }
  return trace.instance().job(j).processing() - trace.work(j, t);
}

Partition partition(const ScheduleTrace& trace, const TimePoint& t) {
  Partition out;
  const Rational& alpha = trace.instance().alpha().value();
  for (const auto& job : trace.instance().jobs()) {
    auto c = trace.completion(job.id);
    if (c && *c <= t) {
      out.done.push_back(job.id);
      continue;
    }
    if (job.release > t) continue;
    out.alive.push_back(job.id);
    if (!committed_at(trace, job.id, t) || trace.work(job.id, t) <= alpha * job.processing()) {
      out.non_clairvoyant.push_back(job.id);
    } else {
      out.clairvoyant.push_back(job.id);
    }
  }
  for (auto* set : {&out.alive, &out.non_clairvoyant, &out.clairvoyant, &out.done}) {
    std::sort(set->begin(), set->end());
  }
  return out;
}

std::vector<Interval> lifetime(const ScheduleTrace& trace, std::span<const JobId> jobs,
                               const TimePoint& t) {
  if (jobs.empty()) throw Error("lifetime of an empty job set");
  std::vector<Interval> parts;
  for (JobId id : jobs) {
    const Job& job = trace.instance().job(id);
    if (job.release > t) continue;
    TimePoint hi = t;
    if (auto c = trace.completion(id); c && *c < hi) hi = *c;
    parts.push_back({job.release, hi});
  }
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (auto& p : parts) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      if (merged.back().hi < p.hi) merged.back().hi = p.hi;
    } else {
      merged.push_back(std::move(p));
    }
  }
  return merged;
}

Duration interval_work(const ScheduleTrace& trace, JobId j, const Interval& interval) {
  if (interval.hi < interval.lo) return 0;
  return trace.work(j, interval.hi) - trace.work(j, interval.lo);
}

}  // namespace flowsched
