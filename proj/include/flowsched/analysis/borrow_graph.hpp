#pragma once

#include <set>
#include <vector>

#include "flowsched/trace.hpp"

namespace flowsched {

enum class BorrowTag { kNonClairvoyant, kClairvoyant };

/// (from, to, tag): job `to` received work during the lifetime of `from`
/// while being non-clairvoyant (tag N) or clairvoyant (tag C).
struct BorrowEdge {
  JobId from = 0;
  JobId to = 0;
  BorrowTag tag = BorrowTag::kNonClairvoyant;

  friend auto operator<=>(const BorrowEdge&, const BorrowEdge&) = default;
};

/// Multigraph over all jobs of the instance; a pair can carry both tags.
class BorrowGraph {
 public:
  BorrowGraph() = default;
  BorrowGraph(std::vector<JobId> vertices, std::vector<BorrowEdge> edges);

  const std::vector<JobId>& vertices() const { return vertices_; }
  const std::vector<BorrowEdge>& edges() const { return edges_; }
  bool contains(JobId id) const;
  bool has_edge(JobId from, JobId to) const;
  bool has_edge(JobId from, JobId to, BorrowTag tag) const;
  /// Distinct successors of `from`, ascending.
  std::vector<JobId> successors(JobId from) const;

 private:
  std::vector<JobId> vertices_;
  std::vector<BorrowEdge> edges_;  // sorted, unique
};

/// Edges are measure-based: i must receive positive work on a sub-interval
/// of positive length inside I_j = [r_j, min(C_j, t)] while in N (resp. C).
BorrowGraph build_borrow_graph(const ScheduleTrace& trace, const TimePoint& t);

/// R_j: jobs reachable from j, including j. Sorted. Throws on unknown j.
std::vector<JobId> reachable(const BorrowGraph& graph, JobId j);

}  // namespace flowsched
