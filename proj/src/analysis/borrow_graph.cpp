#include "flowsched/analysis/borrow_graph.hpp"

#include <algorithm>
#include <deque>

namespace flowsched {

BorrowGraph::BorrowGraph(std::vector<JobId> vertices, std::vector<BorrowEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool BorrowGraph::contains(JobId id) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), id);
}

bool BorrowGraph::has_edge(JobId from, JobId to) const {
  return has_edge(from, to, BorrowTag::kNonClairvoyant) || has_edge(from, to, BorrowTag::kClairvoyant);
}

bool BorrowGraph::has_edge(JobId from, JobId to, BorrowTag tag) const {
  return std::binary_search(edges_.begin(), edges_.end(), BorrowEdge{from, to, tag});
}

std::vector<JobId> BorrowGraph::successors(JobId from) const {
  std::vector<JobId> out;
  auto lo = std::lower_bound(edges_.begin(), edges_.end(), BorrowEdge{from, 0, BorrowTag::kNonClairvoyant},
                             [](const BorrowEdge& a, const BorrowEdge& b) { return a.from < b.from; });
  for (auto it = lo; it != edges_.end() && it->from == from; ++it) {
    if (out.empty() || out.back() != it->to) out.push_back(it->to);
  }
  return out;
}

BorrowGraph build_borrow_graph(const ScheduleTrace& trace, const TimePoint& t) {
  std::vector<JobId> vertices;
  std::vector<BorrowEdge> edges;
  for (const auto& job : trace.instance().jobs()) vertices.push_back(job.id);

  for (const auto& owner : trace.instance().jobs()) {
    if (owner.release > t) continue;
    TimePoint hi = t;
    if (auto c = trace.completion(owner.id); c && *c < hi) hi = *c;
    const TimePoint& lo = owner.release;
    if (!(lo < hi)) continue;

    for (const auto& seg : trace.segments()) {
      if (!(seg.start < hi)) break;
      if (!(lo < seg.end)) continue;
      const TimePoint& a = seg.start < lo ? lo : seg.start;
      const TimePoint& b = hi < seg.end ? hi : seg.end;
      for (const auto& [id, rate] : seg.rates) {
        if (id == owner.id) continue;
        // Executed i is non-clairvoyant strictly before its emission and
        // clairvoyant strictly after it.
        const auto s = trace.emission(id);
        if (!s || a < *s) edges.push_back({owner.id, id, BorrowTag::kNonClairvoyant});
        if (s && *s < b) edges.push_back({owner.id, id, BorrowTag::kClairvoyant});
      }
    }
  }
  return BorrowGraph(std::move(vertices), std::move(edges));
}

std::vector<JobId> reachable(const BorrowGraph& graph, JobId j) {
  if (!graph.contains(j)) throw Error("unknown job id " + std::to_string(j));
  std::vector<JobId> seen{j};
  std::deque<JobId> queue{j};
  while (!queue.empty()) {
    JobId cur = queue.front();
    queue.pop_front();
    for (JobId next : graph.successors(cur)) {
      if (std::find(seen.begin(), seen.end(), next) == seen.end()) {
        seen.push_back(next);
        queue.push_back(next);
      }
    }
  }
  std::sort(seen.begin(), seen.end());
  return seen;
}

}  // namespace flowsched
