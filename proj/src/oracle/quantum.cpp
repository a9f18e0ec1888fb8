#include "flowsched/oracle/quantum.hpp"

#include <algorithm>

namespace flowsched::oracle {

namespace {

struct Slot {
  JobId id;
  TimePoint release;
  Duration p;
  Duration y;
  bool done = false;
};

// Jobs with the least elapsed work among `pool`, all at rate 1/|set|.
std::vector<std::pair<JobId, Rational>> share_least_elapsed(const std::vector<const Slot*>& pool) {
  Duration least = pool.front()->y;
  for (const Slot* s : pool) least = std::min(least, s->y);
  std::vector<JobId> picked;
  for (const Slot* s : pool) {
    if (s->y == least) picked.push_back(s->id);
  }
  std::vector<std::pair<JobId, Rational>> out;
  for (JobId id : picked) out.emplace_back(id, Rational(1, static_cast<unsigned long>(picked.size())));
  return out;
}

const Slot* least_remaining(const std::vector<const Slot*>& pool) {
  const Slot* best = nullptr;
  for (const Slot* s : pool) {
    if (best == nullptr || s->p - s->y < best->p - best->y ||
        (s->p - s->y == best->p - best->y && s->id < best->id)) {
      best = s;
    }
  }
  return best;
}

std::vector<std::pair<JobId, Rational>> choose(PolicyKind policy, const Rational& alpha,
                                               const std::vector<const Slot*>& alive) {
  switch (policy) {
    case PolicyKind::kSrpt:
      return {{least_remaining(alive)->id, Rational(1)}};
    case PolicyKind::kSetf:
      return share_least_elapsed(alive);
    case PolicyKind::kAlphaClairvoyant: {
      // C: processed beyond alpha * p. N: the rest.
      std::vector<const Slot*> c_jobs;
      std::vector<const Slot*> n_jobs;
      for (const Slot* s : alive) (s->y > alpha * s->p ? c_jobs : n_jobs).push_back(s);
      if (n_jobs.empty()) return {{least_remaining(c_jobs)->id, Rational(1)}};
      if (c_jobs.empty()) return share_least_elapsed(n_jobs);
      const Slot* k = least_remaining(c_jobs);
      Duration least_y = n_jobs.front()->y;
      for (const Slot* s : n_jobs) least_y = std::min(least_y, s->y);
      if (alpha * (k->p - k->y) <= (1 - alpha) * least_y) return {{k->id, Rational(1)}};
      return share_least_elapsed(n_jobs);
    }
  }
  throw Error("unknown policy");
}

}  // namespace

ScheduleTrace simulate_quantum(const Instance& instance, PolicyKind policy, const Rational& h) {
  if (h <= 0) throw Error("quantum must be positive");
  if (!instance.resolved()) throw Error("unresolved: quantum oracle needs committed processing times");
  const Rational& alpha = instance.alpha().value();

  std::vector<Slot> slots;
  for (const auto& job : instance.jobs()) slots.push_back({job.id, job.release, job.processing(), Rational(0)});

  std::vector<ExecutionSegment> segments;
  TimePoint now = 0;
  std::size_t finished = 0;
  while (finished < slots.size()) {
    std::vector<const Slot*> alive;
    std::optional<TimePoint> next_release;
    for (const Slot& s : slots) {
      if (s.done) continue;
      if (s.release <= now) {
        alive.push_back(&s);
      } else if (!next_release || s.release < *next_release) {
        next_release = s.release;
      }
    }
    if (alive.empty()) {
      now = *next_release;
      continue;
    }
    const auto rates = choose(policy, alpha, alive);
    TimePoint end = now + h;
    if (next_release && *next_release < end) end = *next_release;
    for (const auto& [id, rate] : rates) {
      const Slot& s = *std::find_if(slots.begin(), slots.end(), [&](const Slot& x) { return x.id == id; });
      const TimePoint done_at = now + (s.p - s.y) / rate;
      if (done_at < end) end = done_at;
    }
    for (const auto& [id, rate] : rates) {
      Slot& s = *std::find_if(slots.begin(), slots.end(), [&](const Slot& x) { return x.id == id; });
      s.y += rate * (end - now);
      if (s.y == s.p) {
        s.done = true;
        ++finished;
      }
    }
    segments.push_back({now, end, rates});
    now = end;
  }
  return ScheduleTrace(instance, std::move(segments));
}

}  // namespace flowsched::oracle
