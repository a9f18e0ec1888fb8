#include <doctest.h>

#include "flowsched/analysis/beta.hpp"
#include "flowsched/analysis/borrow_graph.hpp"
#include "flowsched/analysis/flow_network.hpp"
#include "flowsched/analysis/segments.hpp"
#include "flowsched/analysis/trace_checks.hpp"
#include "flowsched/analysis/verifier.hpp"
#include "flowsched/generators.hpp"
#include "helpers.hpp"

using namespace flowsched;
using namespace flowsched::testing;

namespace {

// Two equal jobs: the alpha policy shares [0,2], then runs job 1 on [2,3]
// and job 2 on [3,4]. SRPT runs job 1 on [0,2], job 2 on [2,4].
struct PairFixture {
  Instance inst = jobs_of({{q(0), q(2)}, {q(0), q(2)}});
  ScheduleTrace alg = run(inst, PolicyKind::kAlphaClairvoyant);
  ScheduleTrace opt = run(inst, PolicyKind::kSrpt);
};

}  // namespace

TEST_CASE("borrow graph of a shared pair") {
  const Instance inst = jobs_of({{q(0), q(2)}, {q(0), q(2)}});
  const auto setf = run(inst, PolicyKind::kSetf);
  const auto g = build_borrow_graph(setf, q(3));
  CHECK(g.vertices() == std::vector<JobId>{1, 2});
  CHECK(g.has_edge(1, 2, BorrowTag::kNonClairvoyant));
  CHECK(g.has_edge(2, 1, BorrowTag::kNonClairvoyant));
  CHECK_FALSE(g.has_edge(1, 1));
  CHECK(reachable(g, 1) == std::vector<JobId>{1, 2});
  CHECK_THROWS_AS(reachable(g, 7), Error);
}

TEST_CASE("borrow graph tags") {
  // Job 1 runs alone on [0,1]; job 2 then runs alone, is emitted at 3/2 and
  // completes at 2; job 1 finishes on [2,5].
  const Instance inst = jobs_of({{q(0), q(4)}, {q(1), q(1)}});
  const auto alg = run(inst, PolicyKind::kAlphaClairvoyant);
  REQUIRE(alg.emission(2) == q(3, 2));
  REQUIRE(alg.completion(2) == q(2));

  const auto early = build_borrow_graph(alg, q(3, 2));
  CHECK(early.has_edge(1, 2, BorrowTag::kNonClairvoyant));
  CHECK_FALSE(early.has_edge(1, 2, BorrowTag::kClairvoyant));
  CHECK_FALSE(early.has_edge(2, 1));

  const auto late = build_borrow_graph(alg, q(2));
  CHECK(late.has_edge(1, 2, BorrowTag::kNonClairvoyant));
  CHECK(late.has_edge(1, 2, BorrowTag::kClairvoyant));
  CHECK_FALSE(late.has_edge(2, 1));
  CHECK(late.successors(1) == std::vector<JobId>{2});
  CHECK(reachable(late, 2) == std::vector<JobId>{2});
}

TEST_CASE("flow network and beta on the pair at t = 5/2") {
  PairFixture f;
  const TimePoint t = q(5, 2);
  const auto net = build_flow_network(f.alg, f.opt, t);
  CHECK(net.supply == std::map<JobId, Rational>{{1, q(1, 2)}});
  CHECK(net.demand == std::map<JobId, Rational>{{2, q(1)}});
  CHECK(net.opt_alive == std::vector<JobId>{2});
  CHECK(net.infinite_capacity > net.total_supply() + net.total_demand());
  CHECK(net.discretization.front() == q(0));
  CHECK(net.discretization.back() == t);
  for (const auto& d : net.dummies) CHECK(d.capacity > 0);

  const auto flow = max_flow(net);
  CHECK(flow.value == q(1, 2));
  CHECK(flow.saturated);
  CHECK(check_flow_feasible(net, flow).empty());
  CHECK(flow.value == max_flow(net, false).value);

  const auto g = build_borrow_graph(f.alg, t);
  const auto beta = decompose_beta(flow, net);
  CHECK(beta.at(1, 2) == q(1, 2));
  CHECK(beta.row_sum(1) == q(1, 2));
  CHECK(beta.column_sum(2) == q(1, 2));
  CHECK(beta.discarded_cycle_flow == 0);
  CHECK(check_beta_properties(beta, g, f.alg, f.opt, t).pass);
  CHECK(check_refinement_stability(net, flow, f.alg, f.opt).empty());
  CHECK(check_positive_paths(net, g).empty());

  BetaMatrix bumped = beta;
  bumped.values[{1, 2}] = q(2);
  const auto bad = check_beta_properties(bumped, g, f.alg, f.opt, t);
  CHECK_FALSE(bad.pass);
  bool column = false, row = false;
  for (const auto& v : bad.violations) {
    column |= v.rfind("(iii)", 0) == 0;
    row |= v.rfind("(ii)", 0) == 0;
  }
  CHECK(column);
  CHECK(row);

  BetaMatrix outside = beta;
  outside.values[{2, 1}] = q(1, 4);
  CHECK_FALSE(check_beta_properties(outside, g, f.alg, f.opt, t).pass);
}

TEST_CASE("infeasible flows are reported") {
  PairFixture f;
  const auto net = build_flow_network(f.alg, f.opt, q(5, 2));
  auto flow = max_flow(net);
  for (auto& x : flow.arc_flow) x *= 2;
  CHECK_FALSE(check_flow_feasible(net, flow).empty());
}

TEST_CASE("zero supply") {
  PairFixture f;
  for (const TimePoint& t : {q(0), q(1), q(4)}) {
    const auto net = build_flow_network(f.alg, f.opt, t);
    CHECK(net.total_supply() == 0);
    const auto flow = max_flow(net);
    CHECK(flow.value == 0);
    CHECK(flow.saturated);
    CHECK(decompose_beta(flow, net).values.empty());
  }
}

TEST_CASE("segments and local bounds on the pair") {
  PairFixture f;
  const TimePoint t = q(5, 2);
  // Job 1 is clairvoyant here, so there is nothing to segment.
  CHECK(compute_segments(f.alg, f.opt, t).segments.empty());

  // Three equal jobs share until y = 1 at t = 3; SRPT has finished job 1 at 2.
  const Instance triple = jobs_of({{q(0), q(2)}, {q(0), q(2)}, {q(0), q(2)}});
  const auto alg3 = run(triple, PolicyKind::kAlphaClairvoyant);
  const auto opt3 = run(triple, PolicyKind::kSrpt);
  const auto seg = compute_segments(alg3, opt3, t);
  REQUIRE(seg.segments.size() == 1);
  CHECK(seg.segments[0].jobs == std::vector<JobId>{1});
  CHECK(seg.segments[0].dominated == std::vector<JobId>{2, 3});
  CHECK(seg.segments[0].separated.empty());
  CHECK(seg.truncated.at(1) == q(5, 6));
  CHECK(seg.strict_chain);
  const auto lb3 = check_local_bounds(alg3, opt3, t, triple.alpha());
  CHECK(lb3.alive == 3);
  CHECK(lb3.alive_minus_opt == 1);
  CHECK(lb3.nonclairvoyant_minus_opt == 1);
  CHECK(lb3.pass);

  const auto lb = check_local_bounds(f.alg, f.opt, t, f.inst.alpha());
  CHECK(lb.alive == 2);
  CHECK(lb.opt_alive == 1);
  CHECK(lb.alive_minus_opt == 1);
  CHECK(lb.factor == q(2));
  CHECK_FALSE(lb.extrapolated);
  CHECK(lb.pass);

  const auto thirds = check_local_bounds(f.alg, f.opt, t, Alpha(q(2, 3)));
  CHECK(thirds.factor == q(3));
  CHECK_FALSE(thirds.extrapolated);
  const auto odd = check_local_bounds(f.alg, f.opt, t, Alpha(q(3, 5)));
  CHECK(odd.factor == q(3));  // 1/(1 - 3/5) = 5/2
  CHECK(odd.extrapolated);
  CHECK(check_local_bounds(f.alg, f.opt, t, Alpha(q(1))).skipped);
}

TEST_CASE("policy rule checks catch a wrong trace") {
  PairFixture f;
  const auto times = analysis_times(f.alg, f.opt);
  CHECK(check_policy_rules(f.alg, times).empty());
  CHECK(check_clairvoyant_blocking(f.alg, times).empty());
  CHECK(check_catch_up(f.alg, times).empty());
  CHECK(check_flow_identity(f.alg).empty());
  // SRPT's schedule is not one the alpha policy can produce: it runs job 1
  // alone while job 2 has less elapsed work.
  const auto wrong = check_policy_rules(f.opt, analysis_times(f.opt, f.opt));
  REQUIRE_FALSE(wrong.empty());
  CHECK(wrong.front().check == "setf-like");
  CHECK_FALSE(verify_traces(f.opt, f.opt).pass());
}

TEST_CASE("verifier passes the small examples") {
  for (const auto& inst : {jobs_of({{q(0), q(2)}, {q(0), q(2)}}), jobs_of({{q(0), q(4)}, {q(0), q(2)}}),
                           jobs_of({{q(0), q(3)}, {q(1), q(1)}, {q(1), q(5)}, {q(2), q(2)}}, q(2, 3))}) {
    const auto report = verify_instance(inst, VerifyOptions{true, true, true});
    CHECK(report.pass());
    CHECK_FALSE(report.points.empty());
    CHECK(verify_report_to_json(report)["pass"] == true);
  }
}

TEST_CASE("property: structural checks over random instances") {
  RandomInstanceParams p;
  p.n = 6;
  p.max_p = 6;
  p.density = q(2);
  for (const Rational& a : {q(1, 2), q(2, 3), q(3, 4), q(1, 3)}) {
    const auto corpus = random_corpus(40, p, Alpha(a), 1000);
    for (const auto& inst : corpus) {
      const auto alg = run(inst, PolicyKind::kAlphaClairvoyant);
      const auto opt = run(inst, PolicyKind::kSrpt);
      for (const auto& t : analysis_times(alg, opt)) {
        const auto g = build_borrow_graph(alg, t);
        const auto net = build_flow_network(alg, opt, t);
        const auto flow = max_flow(net);
        CHECK(flow.saturated);
        CHECK(flow.value == max_flow(net, false).value);
        CHECK(check_flow_feasible(net, flow).empty());
        const auto beta = decompose_beta(flow, net);
        CHECK(check_beta_properties(beta, g, alg, opt, t).pass);
        CHECK(check_reachable_closure(alg, g, t).empty());
        CHECK(check_direct_borrow_order(alg, g, t).empty());
        const auto lb = check_local_bounds(alg, opt, t, inst.alpha());
        CHECK((lb.pass || lb.extrapolated));
        if (lb.opt_alive == 0) CHECK(lb.alive == 0);
      }
    }
  }
}
