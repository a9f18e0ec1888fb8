#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "flowsched/trace.hpp"

namespace flowsched {

/// Dummy vertex v^i_l: job i's algorithm work on the l-th discretization
/// interval. Only created when that work is positive.
struct DummyVertex {
  JobId job = 0;
  std::size_t interval = 0;
  Rational capacity;  // q_i([tau_l, tau_{l+1}])
};

/// Network arc between job and dummy vertices. Arcs job -> dummy are
/// uncapacitated; dummy -> job arcs carry the dummy's capacity.
struct FlowArc {
  int from = 0;
  int to = 0;
  Rational capacity;
  bool infinite = false;
};

/// G_F at time t. Vertex numbering: 0 is the source, 1..J the jobs released
/// by t in id order, then the dummies ordered by (job, interval), then the
/// sink. Source and sink arcs are implied by `supply` and `demand`.
struct FlowNetwork {
  TimePoint t;
  std::vector<TimePoint> discretization;
  std::vector<JobId> jobs;
  std::vector<DummyVertex> dummies;
  std::vector<FlowArc> arcs;
  std::map<JobId, Rational> supply;  // j in A \ O: p_j(t) in the algorithm
  std::map<JobId, Rational> demand;  // i in O: y_i(t) in the algorithm
  std::vector<JobId> opt_alive;      // O
  Rational infinite_capacity;        // strictly above any feasible flow

  int source() const { return 0; }
  int sink() const { return static_cast<int>(1 + jobs.size() + dummies.size()); }
  int vertex_count() const { return sink() + 1; }
  int job_vertex(JobId id) const;
  int dummy_vertex(std::size_t index) const { return static_cast<int>(1 + jobs.size() + index); }
  bool is_job_vertex(int v) const { return v >= 1 && v <= static_cast<int>(jobs.size()); }
  bool is_dummy_vertex(int v) const { return v > static_cast<int>(jobs.size()) && v < sink(); }
  JobId job_of(int v) const;  // owner job for job and dummy vertices
  std::string vertex_name(int v) const;

  Rational total_supply() const;
  Rational total_demand() const;
};

/// Builds G_F for the algorithm trace `alg` against the reference schedule
/// `opt` at time t. T is {0, t}, releases and algorithm completions up to t,
/// plus any `extra_times` inside [0, t].
FlowNetwork build_flow_network(const ScheduleTrace& alg, const ScheduleTrace& opt, const TimePoint& t,
                               std::span<const TimePoint> extra_times = {});

struct FlowSolution {
  Rational value;
  bool saturated = false;  // value == total supply
  std::vector<Rational> arc_flow;  // aligned with network.arcs
  std::map<JobId, Rational> source_flow;
  std::map<JobId, Rational> sink_flow;
};

/// Exact maximum flow. With `restrict_demand_outflow`, vertices of O keep no
/// outgoing arcs other than to the sink; the flow value is unchanged by this.
FlowSolution max_flow(const FlowNetwork& network, bool restrict_demand_outflow = true);

/// Capacity and conservation check of `flow` on `network`. Returns the empty
/// string when feasible, otherwise a description of the first violation.
std::string check_flow_feasible(const FlowNetwork& network, const FlowSolution& flow);

/// Job-level adjacency of G_F: j -> i iff some arc j -> v^i_l exists.
std::vector<std::pair<JobId, JobId>> job_adjacency(const FlowNetwork& network);

}  // namespace flowsched
