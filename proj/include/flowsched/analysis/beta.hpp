#pragma once

#include <map>
#include <string>
#include <vector>

#include "flowsched/analysis/borrow_graph.hpp"
#include "flowsched/analysis/flow_network.hpp"

namespace flowsched {

struct BetaMatrix {
  std::map<std::pair<JobId, JobId>, Rational> values;  // (j, i) -> beta(j, i), positive entries only
  Rational discarded_cycle_flow;                       // flow on cycles, dropped before peeling
  std::size_t path_count = 0;

  Rational at(JobId j, JobId i) const;
  Rational row_sum(JobId j) const;
  Rational column_sum(JobId i) const;
};

/// Path decomposition of `flow`: cycles are cancelled, then the
/// lexicographically smallest positive source-sink path (by vertex sequence)
/// is peeled until no flow remains.
BetaMatrix decompose_beta(const FlowSolution& flow, const FlowNetwork& network);

struct BetaReport {
  bool pass = true;
  std::vector<std::string> violations;
};

/// (i) beta(j,i) = 0 for i outside R_j, (ii) row sums equal p_j(t) on A\O,
/// (iii) column sums at most y_i(t) on O. Entries outside (A\O) x O fail too.
BetaReport check_beta_properties(const BetaMatrix& beta, const BorrowGraph& graph, const ScheduleTrace& alg,
                                 const ScheduleTrace& opt, const TimePoint& t);

/// Refines T with the midpoint of every interval, transports `flow`
/// proportionally onto the refined network and checks that it stays feasible
/// with identical job-to-job totals; then re-solves the refined network and
/// checks it still saturates. Returns an empty string on success.
std::string check_refinement_stability(const FlowNetwork& network, const FlowSolution& flow,
                                       const ScheduleTrace& alg, const ScheduleTrace& opt);

/// f(j, i): total flow from job vertex j through dummies of i.
std::map<std::pair<JobId, JobId>, Rational> job_to_job_flow(const FlowNetwork& network, const FlowSolution& flow);

}  // namespace flowsched
