#include "flowsched/analysis/verifier.hpp"

#include "flowsched/analysis/beta.hpp"
#include "flowsched/analysis/borrow_graph.hpp"
#include "flowsched/analysis/flow_network.hpp"
#include "flowsched/analysis/segments.hpp"
#include "flowsched/engine.hpp"
#include "flowsched/metrics.hpp"

namespace flowsched {

namespace {

void append(std::vector<Violation>& out, std::vector<Violation> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

}  // namespace

VerifyReport verify_traces(const ScheduleTrace& alg, const ScheduleTrace& opt, const VerifyOptions& options) {
  VerifyReport report;
  const Alpha& alpha = alg.instance().alpha();
  report.alpha = alpha.value();
  report.alg_flow = total_flow_time(alg);
  report.opt_flow = total_flow_time(opt);
  auto& bad = report.violations;

  if (!(alg.instance().with_alpha(alpha) == opt.instance().with_alpha(alpha))) {
    bad.push_back({"instance", TimePoint(0), "algorithm and reference traces are on different instances"});
    return report;
  }
  append(bad, check_flow_identity(alg));
  append(bad, check_flow_identity(opt));

  const auto times = analysis_times(alg, opt);
  if (options.policy_checks) {
    append(bad, check_policy_rules(alg, times));
    append(bad, check_clairvoyant_blocking(alg, times));
    append(bad, check_catch_up(alg, times));
  }

  for (const auto& t : times) {
    PointReport pt;
    pt.t = t;
    const std::size_t before = bad.size();

    const BorrowGraph graph = build_borrow_graph(alg, t);
    const FlowNetwork net = build_flow_network(alg, opt, t);
    const FlowSolution flow = max_flow(net);
    pt.supply = net.total_supply();
    pt.flow_value = flow.value;
    pt.saturated = flow.saturated;
    if (!pt.saturated) {
      bad.push_back({"flow-saturation", t, "max flow " + to_string(flow.value) + " < supply " + to_string(pt.supply)});
    }
    if (auto why = check_flow_feasible(net, flow); !why.empty()) bad.push_back({"flow-feasible", t, why});
    if (options.cross_check_unrestricted) {
      const FlowSolution full = max_flow(net, false);
      if (full.value != flow.value) {
        bad.push_back({"flow-restriction", t, "unrestricted max flow " + to_string(full.value) + " differs"});
      }
    }

    if (pt.saturated) {
      const BetaMatrix beta = decompose_beta(flow, net);
      pt.discarded_cycle_flow = beta.discarded_cycle_flow;
      const BetaReport br = check_beta_properties(beta, graph, alg, opt, t);
      pt.beta_ok = br.pass;
      for (const auto& v : br.violations) bad.push_back({"beta", t, v});
      if (options.refinement) {
        auto why = check_refinement_stability(net, flow, alg, opt);
        pt.refinement_ok = why.empty();
        if (!why.empty()) bad.push_back({"refinement", t, why});
      }
    }
    append(bad, check_positive_paths(net, graph));
    append(bad, check_direct_borrow_order(alg, graph, t));
    append(bad, check_reachable_closure(alg, graph, t));

    const SegmentPartition segs = compute_segments(alg, opt, t);
    pt.segment_count = segs.segments.size();
    const LocalBoundsReport lb = check_local_bounds(alg, opt, t, alpha);
    pt.segments_ok = segs.strict_chain && pt.segment_count <= lb.opt_alive + 1;
    if (!segs.strict_chain) bad.push_back({"segments", t, "segment sets O_S do not form a strict chain"});
    if (pt.segment_count > lb.opt_alive + 1) {
      bad.push_back({"segments", t, std::to_string(pt.segment_count) + " segments exceed |O|+1"});
    }
    pt.alive = lb.alive;
    pt.opt_alive = lb.opt_alive;
    pt.nonclairvoyant_minus_opt = lb.nonclairvoyant_minus_opt;
    pt.clairvoyant_minus_opt = lb.clairvoyant_minus_opt;
    pt.extrapolated = lb.extrapolated;
    pt.bounds_ok = lb.pass;
    for (const auto& v : lb.violations) {
      const bool empty_opt = lb.opt_alive == 0;
      if (lb.extrapolated && !empty_opt) {
        report.notes.push_back({"local-bounds-extrapolated", t, v});
      } else {
        bad.push_back({"local-bounds", t, v});
      }
    }
    pt.pass = bad.size() == before;
    report.points.push_back(std::move(pt));
  }
  return report;
}

VerifyReport verify_instance(const Instance& instance, const VerifyOptions& options) {
  AlphaClairvoyantPolicy alpha_policy(instance.alpha());
  SrptPolicy srpt;
  const ScheduleTrace alg = simulate(instance, alpha_policy).trace;
  const ScheduleTrace opt = simulate(alg.instance(), srpt).trace;
  return verify_traces(alg, opt, options);
}

Json verify_report_to_json(const VerifyReport& report) {
  Json doc;
  doc["pass"] = report.pass();
  doc["alpha"] = rational_to_json(report.alpha);
  doc["alg_total_flow"] = rational_to_json(report.alg_flow);
  doc["opt_total_flow"] = rational_to_json(report.opt_flow);
  Json points = Json::array();
  for (const auto& p : report.points) {
    Json j;
    j["t"] = rational_to_json(p.t);
    j["pass"] = p.pass;
    j["alive"] = p.alive;
    j["opt_alive"] = p.opt_alive;
    j["n_minus_o"] = p.nonclairvoyant_minus_opt;
    j["c_minus_o"] = p.clairvoyant_minus_opt;
    j["supply"] = rational_to_json(p.supply);
    j["flow"] = rational_to_json(p.flow_value);
    j["saturated"] = p.saturated;
    j["beta_ok"] = p.beta_ok;
    j["refinement_ok"] = p.refinement_ok;
    j["segments"] = p.segment_count;
    j["segments_ok"] = p.segments_ok;
    j["bounds_ok"] = p.bounds_ok;
    if (p.extrapolated) j["extrapolated"] = true;
    if (p.discarded_cycle_flow != 0) j["discarded_cycle_flow"] = rational_to_json(p.discarded_cycle_flow);
    points.push_back(std::move(j));
  }
  doc["points"] = std::move(points);
  auto list = [](const std::vector<Violation>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) {
      arr.push_back(Json{{"check", v.check}, {"t", rational_to_json(v.t)}, {"detail", v.detail}});
    }
    return arr;
  };
  doc["violations"] = list(report.violations);
  doc["notes"] = list(report.notes);
  return doc;
}

}  // namespace flowsched
