#include "flowsched/analysis/trace_checks.hpp"

#include <algorithm>

#include "flowsched/metrics.hpp"

namespace flowsched {

namespace {

bool contains(const std::vector<JobId>& v, JobId id) { return std::binary_search(v.begin(), v.end(), id); }

std::string jobs_text(JobId a, JobId b) { return "jobs " + std::to_string(a) + "," + std::to_string(b); }

}  // namespace

std::vector<TimePoint> analysis_times(const ScheduleTrace& alg, const ScheduleTrace& opt) {
  std::vector<TimePoint> times = alg.event_times();
  const auto more = opt.event_times();
  times.insert(times.end(), more.begin(), more.end());
  times.push_back(TimePoint(0));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<TimePoint> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    out.push_back(times[k]);
    if (k + 1 < times.size()) out.push_back((times[k] + times[k + 1]) / 2);
  }
  return out;
}

std::vector<Violation> check_policy_rules(const ScheduleTrace& alg, const std::vector<TimePoint>& times) {
  std::vector<Violation> out;
  const Rational& alpha = alg.instance().alpha().value();
  for (const auto& t : times) {
    const Partition part = partition(alg, t);
    const auto idx = alg.segment_at(t);
    if (part.alive.empty()) continue;
    if (!idx || alg.segments()[*idx].total_rate() != 1) {
      out.push_back({"non-idling", t, "alive jobs but machine not fully used"});
      continue;
    }
    const auto& rates = alg.segments()[*idx].rates;
    auto y = [&](JobId id) { return elapsed_work(alg, id, t); };
    auto rem = [&](JobId id) { return remaining(alg, id, t); };

    // A running job at or above its threshold is clairvoyant right after t.
    bool clairvoyant_run = false;
    for (const auto& [k, r] : rates) {
      if (y(k) >= alpha * alg.instance().job(k).processing()) clairvoyant_run = true;
    }
    if (clairvoyant_run) {
      if (rates.size() != 1) {
        out.push_back({"srpt-like", t, "clairvoyant job shares the machine"});
        continue;
      }
      const JobId k = rates.front().first;
      for (JobId j : part.alive) {
        if (rem(k) > rem(j)) out.push_back({"srpt-like", t, jobs_text(k, j) + ": p_k(t) > p_j(t)"});
      }
      continue;
    }
    for (const auto& [k, r] : rates) {
      for (JobId j : part.alive) {
        if (y(k) > y(j)) out.push_back({"setf-like", t, jobs_text(k, j) + ": y_k(t) > y_j(t)"});
      }
    }
    // The branch taken must match the threshold test on the sets at t.
    if (alpha > 0 && alpha < 1 && !part.clairvoyant.empty()) {
      Rational min_c = rem(part.clairvoyant.front());
      for (JobId j : part.clairvoyant) min_c = std::min(min_c, rem(j));
      Rational min_n = y(part.non_clairvoyant.front());
      for (JobId j : part.non_clairvoyant) min_n = std::min(min_n, y(j));
      if (!(min_c > (1 - alpha) / alpha * min_n)) {
        out.push_back({"setf-like", t, "shared among N although the clairvoyant test holds"});
      }
    }
  }
  return out;
}

std::vector<Violation> check_clairvoyant_blocking(const ScheduleTrace& alg, const std::vector<TimePoint>& times) {
  std::vector<Violation> out;
  const Rational& alpha = alg.instance().alpha().value();
  const TimePoint end = alg.makespan();
  for (const auto& t : times) {
    const auto idx = alg.segment_at(t);
    if (!idx) continue;
    for (const auto& [k, r] : alg.segments()[*idx].rates) {
      if (elapsed_work(alg, k, t) < alpha * alg.instance().job(k).processing()) continue;
      const TimePoint ck = alg.completion(k).value_or(end);
      for (const auto& job : alg.instance().jobs()) {
        if (job.id == k || !(job.release < t)) continue;
        const auto cj = alg.completion(job.id);
        if (cj && !(t < *cj)) continue;
        if (interval_work(alg, job.id, {t, ck}) != 0) {
          out.push_back({"clairvoyant-blocking", t, jobs_text(k, job.id) + ": j runs before k completes"});
        }
        if (cj && *cj < ck) out.push_back({"clairvoyant-blocking", t, jobs_text(k, job.id) + ": C_j < C_k"});
      }
    }
  }
  return out;
}

std::vector<Violation> check_catch_up(const ScheduleTrace& alg, const std::vector<TimePoint>& times) {
  std::vector<Violation> out;
  std::vector<Partition> parts;
  parts.reserve(times.size());
  for (const auto& t : times) parts.push_back(partition(alg, t));

  for (const auto& ji : alg.instance().jobs()) {
    const JobId i = ji.id;
    for (const auto& jj : alg.instance().jobs()) {
      const JobId j = jj.id;
      if (i == j) continue;
      std::size_t start = times.size();
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (contains(parts[k].non_clairvoyant, i) && contains(parts[k].non_clairvoyant, j) &&
            alg.rate_after(i, times[k]) > 0) {
          start = k;
          break;
        }
      }
      for (std::size_t k = start; k < times.size(); ++k) {
        if (!contains(parts[k].non_clairvoyant, i) || !contains(parts[k].non_clairvoyant, j)) continue;
        if (elapsed_work(alg, j, times[k]) < elapsed_work(alg, i, times[k])) {
          out.push_back({"catch-up", times[k], jobs_text(j, i) + ": y_j < y_i after i ran at " + to_string(times[start])});
          break;
        }
      }
    }
  }
  return out;
}

std::vector<Violation> check_direct_borrow_order(const ScheduleTrace& alg, const BorrowGraph& graph,
                                                 const TimePoint& t) {
  std::vector<Violation> out;
  const Partition part = partition(alg, t);
  for (const auto& e : graph.edges()) {
    if (e.tag != BorrowTag::kNonClairvoyant) continue;
    if (!contains(part.non_clairvoyant, e.from) || !contains(part.non_clairvoyant, e.to)) continue;
    if (elapsed_work(alg, e.from, t) < elapsed_work(alg, e.to, t)) {
      out.push_back({"direct-borrow", t, jobs_text(e.from, e.to) + ": N-edge but y_j < y_i"});
    }
  }
  return out;
}

std::vector<Violation> check_reachable_closure(const ScheduleTrace& alg, const BorrowGraph& graph,
                                               const TimePoint& t) {
  std::vector<Violation> out;
  const Partition part = partition(alg, t);
  for (const auto& job : alg.instance().jobs()) {
    if (job.release > t) continue;
    const auto r = reachable(graph, job.id);
    const auto spans = lifetime(alg, r, t);
    if (contains(part.alive, job.id)) {
      TimePoint lo = job.release;
      for (JobId k : r) lo = std::min(lo, alg.instance().job(k).release);
      if (spans.size() != 1 || spans.front().lo != lo || spans.front().hi != t) {
        out.push_back({"lifetime", t, "I(R_" + std::to_string(job.id) + ") is not [min r, t]"});
      }
    }
    for (const auto& span : spans) {
      for (const auto& seg : alg.segments()) {
        if (!(seg.start < span.hi)) break;
        if (!(span.lo < seg.end)) continue;
        for (const auto& [k, rate] : seg.rates) {
          if (!contains(r, k)) {
            out.push_back({"cut-closure", t, "job " + std::to_string(k) + " runs inside I(R_" +
                                                 std::to_string(job.id) + ") but is not in R_" +
                                                 std::to_string(job.id)});
          }
        }
      }
    }
  }
  return out;
}

std::vector<Violation> check_positive_paths(const FlowNetwork& network, const BorrowGraph& graph) {
  std::vector<Violation> out;
  std::vector<std::pair<JobId, JobId>> borrow;
  for (const auto& e : graph.edges()) {
    if (contains(network.jobs, e.from) && contains(network.jobs, e.to)) borrow.emplace_back(e.from, e.to);
  }
  borrow.erase(std::unique(borrow.begin(), borrow.end()), borrow.end());
  if (borrow != job_adjacency(network)) {
    out.push_back({"positive-paths", network.t, "flow-network adjacency differs from borrow graph"});
    return out;
  }
  // Same adjacency gives same reachability; check it explicitly on supply/demand pairs.
  for (const auto& [j, s] : network.supply) {
    const auto r = reachable(graph, j);
    std::vector<char> seen(static_cast<std::size_t>(network.vertex_count()), 0);
    std::vector<int> stack{network.job_vertex(j)};
    seen[static_cast<std::size_t>(stack.back())] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto& arc : network.arcs) {
        if (arc.from == u && !seen[static_cast<std::size_t>(arc.to)]) {
          seen[static_cast<std::size_t>(arc.to)] = 1;
          stack.push_back(arc.to);
        }
      }
    }
    for (const auto& [i, d] : network.demand) {
      bool in_flow = seen[static_cast<std::size_t>(network.job_vertex(i))] != 0;
      if (in_flow != contains(r, i)) {
        out.push_back({"positive-paths", network.t, jobs_text(j, i) + ": path existence differs"});
      }
    }
  }
  return out;
}

std::vector<Violation> check_flow_identity(const ScheduleTrace& trace) {
  std::vector<Violation> out;
  const Rational lhs = total_flow_time(trace);
  const Rational rhs = integrated_alive(trace);
  if (lhs != rhs) {
    out.push_back({"flow-identity", trace.makespan(),
                   "sum of flow times " + to_string(lhs) + " != integral of |A| " + to_string(rhs)});
  }
  return out;
}

}  // namespace flowsched
