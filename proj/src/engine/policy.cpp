#include "flowsched/policy.hpp"

#include <algorithm>

namespace flowsched {

std::string_view event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::kArrival: return "arrival";
    case EventKind::kEmission: return "emission";
    case EventKind::kCompletion: return "completion";
    case EventKind::kMerge: return "merge";
    case EventKind::kModeSwitch: return "mode-switch";
    case EventKind::kAdversaryCommit: return "adversary-commit";
  }
  return "unknown";
}

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kAlphaClairvoyant: return "alpha";
    case PolicyKind::kSrpt: return "srpt";
    case PolicyKind::kSetf: return "setf";
  }
  return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
  if (name == "alpha") return PolicyKind::kAlphaClairvoyant;
  if (name == "srpt") return PolicyKind::kSrpt;
  if (name == "setf") return PolicyKind::kSetf;
  throw Error("unknown policy '" + std::string(name) + "'");
}

std::optional<PolicyChange> Policy::next_change(const PolicyView&, const RateDecision&) const {
  return std::nullopt;
}

namespace {

// Jobs of minimal elapsed work among `candidates`.
std::vector<const JobView*> min_elapsed(const std::vector<const JobView*>& candidates) {
  std::vector<const JobView*> out;
  for (const JobView* j : candidates) {
    if (out.empty() || j->elapsed < out.front()->elapsed) {
      out.assign(1, j);
    } else if (j->elapsed == out.front()->elapsed) {
      out.push_back(j);
    }
  }
  return out;
}

RateDecision share_evenly(const std::vector<const JobView*>& jobs) {
  RateDecision d;
  if (jobs.empty()) return d;
  const Rational rate(1, static_cast<unsigned long>(jobs.size()));
  for (const JobView* j : jobs) d.rates.emplace_back(j->id, rate);
  std::sort(d.rates.begin(), d.rates.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return d;
}

RateDecision run_alone(JobId id) { return RateDecision{{{id, Rational(1)}}}; }

// Next level strictly above the min set, among `pool`.
std::optional<PolicyChange> next_merge(const std::vector<const JobView*>& pool,
                                       const std::vector<const JobView*>& min_set) {
  if (min_set.empty()) return std::nullopt;
  const Duration& level = min_set.front()->elapsed;
  std::optional<Duration> next;
  std::vector<JobId> joining;
  for (const JobView* j : pool) {
    if (j->elapsed == level) continue;
    if (!next || j->elapsed < *next) {
      next = j->elapsed;
      joining.assign(1, j->id);
    } else if (j->elapsed == *next) {
      joining.push_back(j->id);
    }
  }
  if (!next) return std::nullopt;
  std::sort(joining.begin(), joining.end());
  return PolicyChange{Duration((*next - level) * static_cast<unsigned long>(min_set.size())),
                      EventKind::kMerge, std::move(joining)};
}

// Classification of the alive set as seen by the threshold rule.
struct ThresholdState {
  std::vector<const JobView*> non_clairvoyant;  // includes jobs sitting at y = alpha p
  std::vector<const JobView*> clairvoyant;
  std::vector<const JobView*> min_set;          // min elapsed within non_clairvoyant
  ExtendedRational min_c_remaining;
  bool srpt_branch = false;
  // SETF branch hit a job that has exactly reached alpha p: it is processed,
  // hence clairvoyant right after now, and the rule settles on SRPT over it.
  bool boundary_flip = false;
};

bool at_boundary(const JobView& j, const Rational& alpha) {
  return j.emitted && j.remaining && j.elapsed == alpha * (j.elapsed + *j.remaining);
}

ThresholdState classify(const PolicyView& view, const Alpha& alpha) {
  ThresholdState s;
  const Rational& a = alpha.value();
  for (const JobView& j : view.alive) {
    const bool clairvoyant = j.emitted && j.remaining && j.elapsed > a * (j.elapsed + *j.remaining);
    if (clairvoyant) {
      s.clairvoyant.push_back(&j);
      if (s.min_c_remaining.is_infinite() || *j.remaining < s.min_c_remaining.value()) {
        s.min_c_remaining = *j.remaining;
      }
    } else {
      s.non_clairvoyant.push_back(&j);
    }
  }
  s.min_set = min_elapsed(s.non_clairvoyant);
  if (!s.clairvoyant.empty()) {
    if (s.non_clairvoyant.empty()) {
      s.srpt_branch = true;
    } else {
      const Rational scaled = (1 - a) / a * s.min_set.front()->elapsed;
      s.srpt_branch = s.min_c_remaining.value() <= scaled;
    }
  }
  if (!s.srpt_branch) {
    s.boundary_flip = std::any_of(s.min_set.begin(), s.min_set.end(),
                                  [&](const JobView* j) { return at_boundary(*j, a); });
  }
  return s;
}

// Smallest remaining, then latest emission, then smallest id.
const JobView* pick_clairvoyant(const std::vector<const JobView*>& jobs) {
  const JobView* best = nullptr;
  for (const JobView* j : jobs) {
    if (best == nullptr) {
      best = j;
      continue;
    }
    if (*j->remaining != *best->remaining) {
      if (*j->remaining < *best->remaining) best = j;
      continue;
    }
    if (*j->emitted_at != *best->emitted_at) {
      if (*best->emitted_at < *j->emitted_at) best = j;
      continue;
    }
    if (j->id < best->id) best = j;
  }
  return best;
}

std::vector<const JobView*> all_of_view(const PolicyView& view) {
  std::vector<const JobView*> out;
  out.reserve(view.alive.size());
  for (const JobView& j : view.alive) out.push_back(&j);
  return out;
}

}  // namespace

RateDecision srpt_decide(const PolicyView& view) {
  const JobView* best = nullptr;
  for (const JobView& j : view.alive) {
    if (!j.remaining) throw Error("srpt needs remaining processing times (omniscient view)");
    if (best == nullptr || *j.remaining < *best->remaining ||
        (*j.remaining == *best->remaining && j.id < best->id)) {
      best = &j;
    }
  }
  if (best == nullptr) return {};
  return run_alone(best->id);
}

RateDecision setf_decide(const PolicyView& view) {
  return share_evenly(min_elapsed(all_of_view(view)));
}

RateDecision alpha_clairvoyant_decide(const PolicyView& view, const Alpha& alpha) {
  if (alpha.is_zero()) return srpt_decide(view);
  if (alpha.is_one()) return setf_decide(view);
  if (view.alive.empty()) return {};

  ThresholdState s = classify(view, alpha);
  if (s.srpt_branch) return run_alone(pick_clairvoyant(s.clairvoyant)->id);
  if (s.boundary_flip) {
    std::vector<const JobView*> pool = s.clairvoyant;
    for (const JobView* j : s.min_set) {
      if (at_boundary(*j, alpha.value())) pool.push_back(j);
    }
    return run_alone(pick_clairvoyant(pool)->id);
  }
  return share_evenly(s.min_set);
}

RateDecision AlphaClairvoyantPolicy::decide(const PolicyView& view) const {
  return alpha_clairvoyant_decide(view, alpha_);
}

std::optional<PolicyChange> AlphaClairvoyantPolicy::next_change(const PolicyView& view,
                                                                const RateDecision& decision) const {
  if (alpha_.is_zero() || view.alive.empty()) return std::nullopt;
  if (alpha_.is_one()) return SetfPolicy{}.next_change(view, decision);

  ThresholdState s = classify(view, alpha_);
  // In the SRPT branch the running job only gets shorter and min_N y is frozen.
  if (s.srpt_branch || s.boundary_flip) return std::nullopt;

  std::optional<PolicyChange> change = next_merge(s.non_clairvoyant, s.min_set);
  if (!s.clairvoyant.empty()) {
    // min_N y rises at 1/|M| until (1-a)/a * min_N y reaches min_C p.
    const Rational& a = alpha_.value();
    const Rational crossing_level = a / (1 - a) * s.min_c_remaining.value();
    const Duration after =
        (crossing_level - s.min_set.front()->elapsed) * static_cast<unsigned long>(s.min_set.size());
    if (!change || after <= change->after) {
      std::vector<JobId> jobs;
      for (const JobView* j : s.clairvoyant) {
        if (*j->remaining == s.min_c_remaining.value()) jobs.push_back(j->id);
      }
      change = PolicyChange{after, EventKind::kModeSwitch, std::move(jobs)};
    }
  }
  return change;
}

RateDecision SrptPolicy::decide(const PolicyView& view) const { return srpt_decide(view); }

RateDecision SetfPolicy::decide(const PolicyView& view) const { return setf_decide(view); }

std::optional<PolicyChange> SetfPolicy::next_change(const PolicyView& view,
                                                    const RateDecision&) const {
  auto pool = all_of_view(view);
  return next_merge(pool, min_elapsed(pool));
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, const Alpha& alpha) {
  switch (kind) {
    case PolicyKind::kAlphaClairvoyant: return std::make_unique<AlphaClairvoyantPolicy>(alpha);
    case PolicyKind::kSrpt: return std::make_unique<SrptPolicy>();
    case PolicyKind::kSetf: return std::make_unique<SetfPolicy>();
  }
  throw Error("unknown policy kind");
}

}  // namespace flowsched
