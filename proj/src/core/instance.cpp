#include "flowsched/instance.hpp"

#include <algorithm>
#include <set>

namespace flowsched {

Alpha::Alpha(Rational value) : value_(std::move(value)) {
  if (value_ < 0 || value_ > 1) {
    throw Error("alpha must lie in [0, 1], got " + to_string(value_));
  }
}

const Duration& Job::processing() const {
  if (const auto* p = std::get_if<Duration>(&proc)) return *p;
  throw Error("unresolved: processing time of job " + std::to_string(id) + " is deferred");
}

std::string rule_name(CommitRule::Kind kind) {
  switch (kind) {
    case CommitRule::Kind::kScaledWork: return "lb1";
    case CommitRule::Kind::kPhasePair: return "lb2";
    case CommitRule::Kind::kFixed: return "fixed";
  }
  return "fixed";
}

CommitRule::Kind parse_rule_name(const std::string& name) {
  if (name == "lb1") return CommitRule::Kind::kScaledWork;
  if (name == "lb2") return CommitRule::Kind::kPhasePair;
  if (name == "fixed") return CommitRule::Kind::kFixed;
  throw Error("unknown commit rule '" + name + "'");
}

const Trigger* AdversaryScript::find(TriggerId id) const {
  for (const auto& t : triggers) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::vector<std::pair<JobId, Duration>> apply_commit_rule(
    const CommitRule& rule, const Alpha& alpha,
    const std::vector<std::pair<JobId, Duration>>& observed) {
  std::vector<std::pair<JobId, Duration>> out;
  switch (rule.kind) {
    case CommitRule::Kind::kScaledWork: {
      if (alpha.is_zero()) throw Error("lb1 commit rule needs alpha > 0");
      // Ranked by observed work, ties by id. The formula is per job, so the
      // rank only fixes the iteration order.
      auto ranked = observed;
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
      });
      for (const auto& [id, y] : ranked) {
        out.emplace_back(id, Rational(y / alpha.value() + rule.slack));
      }
      break;
    }
    case CommitRule::Kind::kPhasePair: {
      auto ranked = observed;
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
      });
      for (std::size_t r = 0; r < ranked.size(); ++r) {
        out.emplace_back(ranked[r].first, r == 0 ? Rational(2 * rule.length) : rule.length);
      }
      break;
    }
    case CommitRule::Kind::kFixed: {
      for (const auto& [id, y] : observed) {
        auto it = rule.values.find(id);
        if (it == rule.values.end()) {
          throw Error("fixed commit rule has no value for job " + std::to_string(id));
        }
        out.emplace_back(id, it->second);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Instance::Instance(std::vector<Job> jobs, Alpha alpha, std::optional<AdversaryScript> adversary)
    : jobs_(std::move(jobs)), alpha_(std::move(alpha)), adversary_(std::move(adversary)) {
  std::sort(jobs_.begin(), jobs_.end(), [](const Job& a, const Job& b) {
    return a.release != b.release ? a.release < b.release : a.id < b.id;
  });
  for (std::size_t i = 0; i < jobs_.size(); ++i) {
    const Job& j = jobs_[i];
    if (!index_.emplace(j.id, i).second) {
      throw Error("duplicate job id " + std::to_string(j.id));
    }
    if (j.release < 0) throw Error("job " + std::to_string(j.id) + " has a negative release");
    if (const auto* p = std::get_if<Duration>(&j.proc)) {
      if (*p <= 0) throw Error("job " + std::to_string(j.id) + " needs a positive processing time");
    } else {
      const auto& d = std::get<Deferred>(j.proc);
      if (!adversary_ || adversary_->find(d.trigger) == nullptr) {
        throw Error("job " + std::to_string(j.id) + " references unknown trigger " +
                    std::to_string(d.trigger));
      }
    }
  }
  if (adversary_) {
    std::set<TriggerId> ids;
    for (std::size_t i = 0; i < adversary_->triggers.size(); ++i) {
      const auto& t = adversary_->triggers[i];
      if (!ids.insert(t.id).second) throw Error("duplicate trigger id " + std::to_string(t.id));
      if (t.fire_at < 0) throw Error("trigger fires before time 0");
      if (i > 0 && !(adversary_->triggers[i - 1].fire_at < t.fire_at)) {
        throw Error("trigger fire times must be strictly increasing");
      }
    }
  }
}

const Job& Instance::job(JobId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown job id " + std::to_string(id));
  return jobs_[it->second];
}

bool Instance::resolved() const {
  return std::all_of(jobs_.begin(), jobs_.end(), [](const Job& j) { return j.committed(); });
}

JobId Instance::max_id() const {
  JobId m = -1;
  for (const auto& j : jobs_) m = std::max(m, j.id);
  return m;
}

Instance Instance::with_alpha(Alpha alpha) const {
  return Instance(jobs_, std::move(alpha), adversary_);
}

Instance Instance::realized(const std::map<JobId, Duration>& commits) const {
  std::vector<Job> jobs = jobs_;
  for (auto& j : jobs) {
    if (j.committed()) continue;
    auto it = commits.find(j.id);
    if (it == commits.end()) {
      throw Error("unresolved: job " + std::to_string(j.id) + " was never committed");
    }
    j.proc = it->second;
  }
  return Instance(std::move(jobs), alpha_);
}

}  // namespace flowsched
