#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowsched/instance.hpp"

namespace flowsched {

/// What a policy may observe about one alive job. `remaining` is present only
/// once the job has emitted its signal, or for omniscient policies.
struct JobView {
  JobId id = 0;
  TimePoint release;
  Duration elapsed;
  bool emitted = false;
  std::optional<TimePoint> emitted_at;
  std::optional<Duration> remaining;
};

struct PolicyView {
  TimePoint now;
  std::vector<JobView> alive;  // sorted by id
};

/// Rates for the interval starting now. Sorted by id, each rate positive,
/// sum at most 1.
struct RateDecision {
  std::vector<std::pair<JobId, Rational>> rates;

  friend bool operator==(const RateDecision&, const RateDecision&) = default;
};

enum class EventKind { kArrival, kEmission, kCompletion, kMerge, kModeSwitch, kAdversaryCommit };

std::string_view event_kind_name(EventKind kind);

/// A point where the policy's decision changes without any exogenous event.
struct PolicyChange {
  Duration after;
  EventKind kind = EventKind::kMerge;
  std::vector<JobId> jobs;
};

enum class PolicyKind { kAlphaClairvoyant, kSrpt, kSetf };

std::string_view policy_name(PolicyKind kind);
PolicyKind parse_policy(std::string_view name);

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view name() const = 0;
  virtual bool omniscient() const { return false; }
  virtual RateDecision decide(const PolicyView& view) const = 0;
  /// Earliest time after view.now at which decide() would answer differently
  /// if only the jobs in `decision` progressed. Empty when no such point exists.
  virtual std::optional<PolicyChange> next_change(const PolicyView& view,
                                                  const RateDecision& decision) const;
};

/// Threshold rule mixing SRPT on emitted jobs with SETF on the rest.
/// alpha = 0 delegates to SRPT and alpha = 1 to SETF.
RateDecision alpha_clairvoyant_decide(const PolicyView& view, const Alpha& alpha);
/// Needs an omniscient view. Ties go to the smallest id.
RateDecision srpt_decide(const PolicyView& view);
RateDecision setf_decide(const PolicyView& view);

class AlphaClairvoyantPolicy final : public Policy {
 public:
  explicit AlphaClairvoyantPolicy(Alpha alpha) : alpha_(std::move(alpha)) {}
  std::string_view name() const override { return "alpha"; }
  RateDecision decide(const PolicyView& view) const override;
  std::optional<PolicyChange> next_change(const PolicyView& view,
                                          const RateDecision& decision) const override;
  const Alpha& alpha() const { return alpha_; }

 private:
  Alpha alpha_;
};

class SrptPolicy final : public Policy {
 public:
  std::string_view name() const override { return "srpt"; }
  bool omniscient() const override { return true; }
  RateDecision decide(const PolicyView& view) const override;
};

class SetfPolicy final : public Policy {
 public:
  std::string_view name() const override { return "setf"; }
  RateDecision decide(const PolicyView& view) const override;
  std::optional<PolicyChange> next_change(const PolicyView& view,
                                          const RateDecision& decision) const override;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind, const Alpha& alpha);

}  // namespace flowsched
