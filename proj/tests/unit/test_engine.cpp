#include <doctest.h>

#include <algorithm>

#include "flowsched/engine.hpp"
#include "flowsched/io.hpp"
#include "flowsched/metrics.hpp"
#include "flowsched/oracle/quantum.hpp"
#include "helpers.hpp"

using namespace flowsched;
using namespace flowsched::testing;

namespace {

// Records every view it is handed, then behaves like SETF.
class SpyPolicy final : public Policy {
 public:
  std::string_view name() const override { return "spy"; }
  RateDecision decide(const PolicyView& view) const override {
    seen.push_back(view);
    return setf_decide(view);
  }
  std::optional<PolicyChange> next_change(const PolicyView& view, const RateDecision& d) const override {
    return SetfPolicy().next_change(view, d);
  }
  mutable std::vector<PolicyView> seen;
};

// Claims a change every 1/1000 time units forever.
class ChattyPolicy final : public Policy {
 public:
  std::string_view name() const override { return "chatty"; }
  RateDecision decide(const PolicyView& view) const override { return setf_decide(view); }
  std::optional<PolicyChange> next_change(const PolicyView&, const RateDecision&) const override {
    return PolicyChange{q(1, 1000), EventKind::kMerge, {}};
  }
};

class IdlePolicy final : public Policy {
 public:
  std::string_view name() const override { return "idle"; }
  RateDecision decide(const PolicyView&) const override { return {}; }
};

std::map<JobId, TimePoint> commit_times(const Instance& adaptive) {
  std::map<JobId, TimePoint> out;
  for (const auto& job : adaptive.jobs()) {
    if (const auto* d = std::get_if<Deferred>(&job.proc)) out[job.id] = adaptive.adversary()->find(d->trigger)->fire_at;
  }
  return out;
}

bool has_kind(const std::vector<EventKind>& kinds, EventKind k) {
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

}  // namespace

TEST_CASE("single job under every built-in policy") {
  for (PolicyKind kind : {PolicyKind::kAlphaClairvoyant, PolicyKind::kSrpt, PolicyKind::kSetf}) {
    const auto t = run(jobs_of({{q(0), q(1)}}), kind);
    REQUIRE(t.segments().size() == 1);
    CHECK(t.segments()[0] == ExecutionSegment{q(0), q(1), {{1, q(1)}}});
    CHECK(t.completion(1) == q(1));
  }
}

TEST_CASE("SETF pair matches the step simulator") {
  const Instance pair = jobs_of({{q(0), q(2)}, {q(0), q(2)}});
  const auto fluid = run(pair, PolicyKind::kSetf);
  const auto stepped = oracle::simulate_quantum(pair, PolicyKind::kSetf, q(1, 64));
  CHECK(fluid.completions() == stepped.completions());
  CHECK(total_flow_time(fluid) == total_flow_time(stepped));
  CHECK(fluid.completion(1) == q(4));
  CHECK(total_flow_time(fluid) == q(8));
}

TEST_CASE("SRPT preempts for a shorter arrival") {
  const Instance inst = jobs_of({{q(0), q(3)}, {q(1), q(1)}});
  const auto fluid = run(inst, PolicyKind::kSrpt);
  const auto stepped = oracle::simulate_quantum(inst, PolicyKind::kSrpt, q(1, 64));
  CHECK(fluid.completions() == stepped.completions());
  CHECK(fluid.completion(2) == q(2));
  CHECK(fluid.completion(1) == q(4));
  CHECK(total_flow_time(fluid) == q(5));
}

TEST_CASE("next_event: a lone future arrival") {
  const Instance inst = jobs_of({{q(5), q(1)}});
  EngineState state(inst);
  EventLog log;
  state.settle(log);
  SetfPolicy setf;
  const PolicyView view = state.view(false);
  const auto ev = next_event(state, setf, view, setf.decide(view));
  REQUIRE(ev);
  CHECK(ev->time == q(5));
  CHECK(has_kind(ev->kinds, EventKind::kArrival));
}

TEST_CASE("next_event: both jobs emit together") {
  const Instance inst = jobs_of({{q(0), q(2)}, {q(0), q(2)}});
  EngineState state(inst);
  EventLog log;
  state.settle(log);
  AlphaClairvoyantPolicy policy(inst.alpha());
  const PolicyView view = state.view(false);
  const auto ev = next_event(state, policy, view, policy.decide(view));
  REQUIRE(ev);
  CHECK(ev->time == q(2));  // y grows at 1/2, alpha p = 1
  CHECK(has_kind(ev->kinds, EventKind::kEmission));
}

TEST_CASE("next_event: a level merge") {
  // Job 1 alone on [0,1] reaches y = 1; jobs 2 and 3 then share from y = 0.
  const Instance inst = jobs_of({{q(0), q(10)}, {q(1), q(10)}, {q(1), q(10)}}, q(1));
  EngineState state(inst);
  EventLog log;
  state.settle(log);
  SetfPolicy setf;
  state.advance(q(1), setf.decide(state.view(false)));
  state.settle(log);
  const PolicyView view = state.view(false);
  const RateDecision d = setf.decide(view);
  CHECK(d.rates == std::vector<std::pair<JobId, Rational>>{{2, q(1, 2)}, {3, q(1, 2)}});
  const auto ev = next_event(state, setf, view, d);
  REQUIRE(ev);
  CHECK(ev->time == q(3));  // 0 + dt/2 = 1
  CHECK(has_kind(ev->kinds, EventKind::kMerge));
}

TEST_CASE("information hiding: a spy policy never sees hidden remainders") {
  const Instance inst = jobs_of({{q(0), q(4)}, {q(0), q(2)}, {q(1), q(3)}, {q(3, 2), q(1)}}, q(1, 2));
  SpyPolicy spy;
  const auto trace = simulate(inst, spy).trace;
  REQUIRE_FALSE(spy.seen.empty());
  std::size_t hidden = 0;
  for (const auto& view : spy.seen) {
    for (const auto& jv : view.alive) {
      const Rational threshold = inst.alpha().value() * inst.job(jv.id).processing();
      if (jv.elapsed < threshold) {
        CHECK_FALSE(jv.remaining.has_value());
        CHECK_FALSE(jv.emitted);
        ++hidden;
      }
      if (jv.remaining) {
        CHECK(jv.emitted);
        CHECK(jv.elapsed >= threshold);
        CHECK(*jv.remaining == inst.job(jv.id).processing() - jv.elapsed);
      }
    }
  }
  CHECK(hidden > 0);
}

TEST_CASE("omniscient views expose every remainder") {
  const Instance inst = jobs_of({{q(0), q(4)}, {q(0), q(2)}});
  EngineState state(inst);
  EventLog log;
  state.settle(log);
  for (const auto& jv : state.view(true).alive) CHECK(jv.remaining.has_value());
  for (const auto& jv : state.view(false).alive) CHECK_FALSE(jv.remaining.has_value());
}

TEST_CASE("the alpha policy's hand trace") {
  const auto res = run_full(jobs_of({{q(0), q(4)}, {q(0), q(2)}}), PolicyKind::kAlphaClairvoyant);
  const auto& t = res.trace;
  CHECK(t.emission(2) == q(2));
  CHECK(t.completion(2) == q(3));
  CHECK(t.emission(1) == q(4));
  CHECK(t.completion(1) == q(6));
  CHECK(total_flow_time(t) == q(9));
  // The step simulator only counts y > alpha p as clairvoyant, so at the shared
  // boundary y = 1 it lags by a fraction of one quantum.
  const Rational h = q(1, 64);
  const auto stepped = oracle::simulate_quantum(t.instance(), PolicyKind::kAlphaClairvoyant, h);
  for (const auto& [id, c] : t.completions()) CHECK(Rational(abs(*stepped.completion(id) - c)) <= h);
}

TEST_CASE("event log order and determinism") {
  const Instance inst = jobs_of({{q(0), q(3)}, {q(1), q(1)}, {q(1), q(4)}, {q(2), q(2)}}, q(2, 3));
  const auto a = run_full(inst, PolicyKind::kAlphaClairvoyant);
  const auto b = run_full(inst, PolicyKind::kAlphaClairvoyant);
  CHECK(a.events == b.events);
  CHECK(event_log_csv(a.events) == event_log_csv(b.events));
  std::map<JobId, int> completions;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    if (i > 0) CHECK(a.events[i - 1].time <= a.events[i].time);
    if (a.events[i].kind == EventKind::kCompletion) {
      for (JobId j : a.events[i].jobs) ++completions[j];
    }
  }
  CHECK(completions.size() == inst.size());
  for (const auto& [j, n] : completions) CHECK(n == 1);
  CHECK(event_log_csv(a.events).rfind("time,kind,job_ids\n", 0) == 0);
}

TEST_CASE("adversary commits") {
  auto fixed = [](JobId id, long p) {
    CommitRule rule;
    rule.kind = CommitRule::Kind::kFixed;
    rule.values[id] = q(p);
    return rule;
  };
  SUBCASE("illegal commitment") {
    const Instance inst({{1, q(0), Deferred{1}}}, Alpha(), AdversaryScript{{Trigger{1, q(2), fixed(1, 2)}}});
    AlphaClairvoyantPolicy policy(inst.alpha());
    CHECK_THROWS_WITH_AS(simulate(inst, policy), doctest::Contains("inconsistent commitment"), Error);
  }
  SUBCASE("boundary commitment emits at the commit instant") {
    const Instance inst({{1, q(0), Deferred{1}}}, Alpha(), AdversaryScript{{Trigger{1, q(2), fixed(1, 4)}}});
    AlphaClairvoyantPolicy policy(inst.alpha());
    const auto res = simulate(inst, policy);
    CHECK(res.trace.emission(1) == q(2));
    CHECK(res.trace.completion(1) == q(4));
    bool committed = false;
    for (const auto& e : res.events) committed |= e.kind == EventKind::kAdversaryCommit && e.time == q(2);
    CHECK(committed);
  }
  SUBCASE("unresolved before the horizon") {
    const Instance inst({{1, q(0), Deferred{1}}}, Alpha(), AdversaryScript{{Trigger{1, q(20), fixed(1, 50)}}});
    AlphaClairvoyantPolicy policy(inst.alpha());
    CHECK_THROWS_WITH_AS(simulate(inst, policy, q(5)), doctest::Contains("unresolved"), Error);
  }
}

TEST_CASE("engine safeguards") {
  const Instance inst = jobs_of({{q(0), q(1)}});
  CHECK_THROWS_WITH_AS(simulate(inst, ChattyPolicy()), doctest::Contains("runaway event loop"), Error);
  CHECK_THROWS_WITH_AS(simulate(inst, IdlePolicy()), doctest::Contains("stalled"), Error);
}

TEST_CASE("horizon truncates the run") {
  const auto res = simulate(jobs_of({{q(0), q(10)}}), SrptPolicy(), q(4));
  CHECK(res.trace.makespan() == q(4));
  CHECK_FALSE(res.trace.all_completed());
  CHECK(total_flow_time(res.trace) == q(4));
}

TEST_CASE("replay check") {
  const Instance inst = jobs_of({{q(0), q(3)}, {q(1), q(1)}, {q(2), q(5)}}, q(1, 2));
  AlphaClairvoyantPolicy policy(inst.alpha());
  const auto trace = simulate(inst, policy).trace;
  CHECK(replay_check(trace, inst, policy).matches);

  auto segs = trace.segments();
  REQUIRE(segs.size() >= 2);
  // Halve the first segment's rate: still feasible, no longer the policy's schedule.
  for (auto& [id, r] : segs[0].rates) r /= 2;
  const ScheduleTrace perturbed(trace.instance(), segs);
  const auto report = replay_check(perturbed, inst, policy);
  CHECK_FALSE(report.matches);
  CHECK(report.divergence.find("segment 0") != std::string::npos);
}

TEST_CASE("golden replay of the two-phase construction") {
  const std::string dir = FLOWSCHED_TEST_DATA;
  const Instance adaptive = load_instance(dir + "/lb2_alpha_half_k3.json");
  AlphaClairvoyantPolicy policy(adaptive.alpha());
  const auto live = simulate(adaptive, policy).trace;
  const ScheduleTrace golden =
      trace_from_csv(read_file(dir + "/lb2_alpha_half_k3_trace.csv"), live.instance(), commit_times(adaptive));
  const auto report = replay_check(golden, adaptive, policy);
  CHECK_MESSAGE(report.matches, report.divergence);
  CHECK(trace_csv(live) == read_file(dir + "/lb2_alpha_half_k3_trace.csv"));
}
