#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flowsched/rational.hpp"

namespace flowsched {

using JobId = int;
using TriggerId = int;

/// The clairvoyance parameter: a job reveals its processing time once an
/// alpha-fraction of it has been processed.
class Alpha {
 public:
  Alpha() : value_(make_rational(1, 2)) {}
  explicit Alpha(Rational value);

  const Rational& value() const { return value_; }
  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  friend bool operator==(const Alpha& a, const Alpha& b) { return a.value_ == b.value_; }

 private:
  Rational value_;
};

/// Processing time still to be chosen by the adversary trigger with this id.
struct Deferred {
  TriggerId trigger;
  friend bool operator==(const Deferred&, const Deferred&) = default;
};

struct Job {
  JobId id = 0;
  TimePoint release;
  std::variant<Duration, Deferred> proc;

  bool committed() const { return std::holds_alternative<Duration>(proc); }
  /// Throws Error("unresolved") when the processing time is still deferred.
  const Duration& processing() const;

  friend bool operator==(const Job&, const Job&) = default;
};

/// How a trigger turns observed elapsed work into processing times.
///
///  - kScaledWork: p = y / alpha + slack for every job (deterministic
///    Omega(1/(1-alpha)) construction).
///  - kPhasePair: order the jobs by observed work (desc, ties by id); the first
///    gets 2 * length, the others get length (the two-phase-job construction).
///  - kFixed: explicit values per job.
struct CommitRule {
  enum class Kind { kScaledWork, kPhasePair, kFixed };

  Kind kind = Kind::kFixed;
  Rational slack;
  Rational length;
  std::map<JobId, Duration> values;

  friend bool operator==(const CommitRule&, const CommitRule&) = default;
};

std::string rule_name(CommitRule::Kind kind);
CommitRule::Kind parse_rule_name(const std::string& name);

struct Trigger {
  TriggerId id = 0;
  TimePoint fire_at;
  CommitRule rule;

  friend bool operator==(const Trigger&, const Trigger&) = default;
};

struct AdversaryScript {
  std::vector<Trigger> triggers;

  const Trigger* find(TriggerId id) const;
  friend bool operator==(const AdversaryScript&, const AdversaryScript&) = default;
};

/// Processing times chosen by `rule` for the jobs in `observed` (id, elapsed
/// work at the trigger time). Returns (id, p) pairs in id order.
std::vector<std::pair<JobId, Duration>> apply_commit_rule(
    const CommitRule& rule, const Alpha& alpha,
    const std::vector<std::pair<JobId, Duration>>& observed);

class Instance {
 public:
  Instance() = default;
  /// Sorts jobs by (release, id) and validates the whole instance.
  Instance(std::vector<Job> jobs, Alpha alpha, std::optional<AdversaryScript> adversary = {});

  const std::vector<Job>& jobs() const { return jobs_; }
  const Alpha& alpha() const { return alpha_; }
  const std::optional<AdversaryScript>& adversary() const { return adversary_; }

  std::size_t size() const { return jobs_.size(); }
  bool empty() const { return jobs_.empty(); }
  /// Throws Error("unknown job id ...").
  const Job& job(JobId id) const;
  bool contains(JobId id) const { return index_.count(id) != 0; }
  /// True when no job has a deferred processing time.
  bool resolved() const;
  JobId max_id() const;

  Instance with_alpha(Alpha alpha) const;
  /// Replaces deferred processing times and drops the adversary script.
  Instance realized(const std::map<JobId, Duration>& commits) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.jobs_ == b.jobs_ && a.alpha_ == b.alpha_ && a.adversary_ == b.adversary_;
  }

 private:
  std::vector<Job> jobs_;
  Alpha alpha_;
  std::optional<AdversaryScript> adversary_;
  std::map<JobId, std::size_t> index_;
};

}  // namespace flowsched
