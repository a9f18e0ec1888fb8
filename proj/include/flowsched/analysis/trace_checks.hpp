#pragma once

#include <string>
#include <vector>

#include "flowsched/analysis/borrow_graph.hpp"
#include "flowsched/analysis/flow_network.hpp"
#include "flowsched/trace.hpp"

namespace flowsched {

struct Violation {
  std::string check;
  TimePoint t;
  std::string detail;
};

/// Event times of both traces up to the later makespan, plus the midpoint of
/// every pair of consecutive times. Sorted, unique.
std::vector<TimePoint> analysis_times(const ScheduleTrace& alg, const ScheduleTrace& opt);

/// Non-idling, and which rule is active on [t, t+eps) at each sample: a
/// clairvoyant job being run has least remaining among A(t); non-clairvoyant
/// jobs being run have least elapsed work among A(t). Meaningful for
/// 0 < alpha < 1 only.
std::vector<Violation> check_policy_rules(const ScheduleTrace& alg, const std::vector<TimePoint>& times);

/// While a clairvoyant job k runs from t', every job alive at t' and released
/// before it receives no work until k completes, and completes after k.
std::vector<Violation> check_clairvoyant_blocking(const ScheduleTrace& alg, const std::vector<TimePoint>& times);

/// Once i runs at t' with i, j in N(t'), y_j(t'') >= y_i(t'') for every
/// later sample t'' at which both are still in N.
std::vector<Violation> check_catch_up(const ScheduleTrace& alg, const std::vector<TimePoint>& times);

/// For j, i in N(t) with an (j, i, N) edge, y_j(t) >= y_i(t).
std::vector<Violation> check_direct_borrow_order(const ScheduleTrace& alg, const BorrowGraph& graph,
                                                 const TimePoint& t);

/// For every j in A(t), I(R_j) is the single interval [min r, t]; for every
/// released j, each job run with positive measure inside I(R_j) is in R_j.
std::vector<Violation> check_reachable_closure(const ScheduleTrace& alg, const BorrowGraph& graph,
                                               const TimePoint& t);

/// Job-level adjacency of the flow network equals the borrow graph's edge
/// set on released jobs, so positive-capacity paths and borrow paths
/// coincide between every supply and demand job.
std::vector<Violation> check_positive_paths(const FlowNetwork& network, const BorrowGraph& graph);

/// Sum of (C_j - r_j) equals the integral of |A(t)| computed from segments.
std::vector<Violation> check_flow_identity(const ScheduleTrace& trace);

}  // namespace flowsched
