#include "flowsched/analysis/beta.hpp"

#include <algorithm>
#include <functional>

namespace flowsched {

Rational BetaMatrix::at(JobId j, JobId i) const {
  auto it = values.find({j, i});
  return it == values.end() ? Rational(0) : it->second;
}

Rational BetaMatrix::row_sum(JobId j) const {
  Rational sum = 0;
  for (const auto& [key, v] : values) {
    if (key.first == j) sum += v;
  }
  return sum;
}

Rational BetaMatrix::column_sum(JobId i) const {
  Rational sum = 0;
  for (const auto& [key, v] : values) {
    if (key.second == i) sum += v;
  }
  return sum;
}

namespace {

// Positive flow as an adjacency map with sorted targets, so "first successor"
// is the smallest vertex id.
using FlowGraph = std::vector<std::map<int, Rational>>;

FlowGraph flow_graph(const FlowSolution& flow, const FlowNetwork& network) {
  FlowGraph g(static_cast<std::size_t>(network.vertex_count()));
  auto add = [&](int a, int b, const Rational& f) {
    if (f > 0) g[static_cast<std::size_t>(a)][b] += f;
  };
  for (const auto& [id, f] : flow.source_flow) add(network.source(), network.job_vertex(id), f);
  for (std::size_t k = 0; k < network.arcs.size(); ++k) {
    add(network.arcs[k].from, network.arcs[k].to, flow.arc_flow[k]);
  }
  for (const auto& [id, f] : flow.sink_flow) add(network.job_vertex(id), network.sink(), f);
  return g;
}

void reduce(FlowGraph& g, const std::vector<int>& path, const Rational& amount) {
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    auto& out = g[static_cast<std::size_t>(path[k])];
    auto it = out.find(path[k + 1]);
    it->second -= amount;
    if (it->second == 0) out.erase(it);
  }
}

// Cancels every directed cycle of positive flow; returns the removed amount
// summed over cycle arcs' bottlenecks.
Rational cancel_cycles(FlowGraph& g) {
  Rational discarded = 0;
  const int n = static_cast<int>(g.size());
  for (;;) {
    std::vector<int> color(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    std::vector<int> cycle;
    std::function<bool(int)> dfs = [&](int u) {
      color[static_cast<std::size_t>(u)] = 1;
      stack.push_back(u);
      for (const auto& [v, f] : g[static_cast<std::size_t>(u)]) {
        if (color[static_cast<std::size_t>(v)] == 1) {
          auto it = std::find(stack.begin(), stack.end(), v);
          cycle.assign(it, stack.end());
          cycle.push_back(v);
          return true;
        }
        if (color[static_cast<std::size_t>(v)] == 0 && dfs(v)) return true;
      }
      stack.pop_back();
      color[static_cast<std::size_t>(u)] = 2;
      return false;
    };
    bool found = false;
    for (int u = 0; u < n && !found; ++u) {
      if (color[static_cast<std::size_t>(u)] == 0) found = dfs(u);
    }
    if (!found) return discarded;
    Rational bottleneck = g[static_cast<std::size_t>(cycle[0])].at(cycle[1]);
    for (std::size_t k = 1; k + 1 < cycle.size(); ++k) {
      const Rational& f = g[static_cast<std::size_t>(cycle[k])].at(cycle[k + 1]);
      if (f < bottleneck) bottleneck = f;
    }
    reduce(g, cycle, bottleneck);
    discarded += bottleneck;
  }
}

}  // namespace

BetaMatrix decompose_beta(const FlowSolution& flow, const FlowNetwork& network) {
  BetaMatrix beta;
  FlowGraph g = flow_graph(flow, network);
  beta.discarded_cycle_flow = cancel_cycles(g);

  const int s = network.source();
  const int t = network.sink();
  // Acyclic now: the greedy smallest-successor walk from s always reaches t,
  // since conservation holds at every inner vertex.
  while (!g[static_cast<std::size_t>(s)].empty()) {
    std::vector<int> path{s};
    while (path.back() != t) {
      const auto& out = g[static_cast<std::size_t>(path.back())];
      if (out.empty()) throw Error("flow decomposition stuck at " + network.vertex_name(path.back()));
      path.push_back(out.begin()->first);
    }
    Rational bottleneck = g[static_cast<std::size_t>(path[0])].at(path[1]);
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
      const Rational& f = g[static_cast<std::size_t>(path[k])].at(path[k + 1]);
      if (f < bottleneck) bottleneck = f;
    }
    reduce(g, path, bottleneck);
    JobId j = network.job_of(path[1]);
    JobId i = network.job_of(path[path.size() - 2]);
    beta.values[{j, i}] += bottleneck;
    ++beta.path_count;
  }
  return beta;
}

BetaReport check_beta_properties(const BetaMatrix& beta, const BorrowGraph& graph, const ScheduleTrace& alg,
                                 const ScheduleTrace& opt, const TimePoint& t) {
  BetaReport report;
  auto fail = [&](std::string what) {
    report.pass = false;
    report.violations.push_back(std::move(what));
  };
  const Partition a = partition(alg, t);
  const Partition o = partition(opt, t);
  auto in = [](const std::vector<JobId>& v, JobId id) { return std::binary_search(v.begin(), v.end(), id); };

  std::vector<JobId> supply_jobs;
  for (JobId j : a.alive) {
    if (!in(o.alive, j)) supply_jobs.push_back(j);
  }

  for (const auto& [key, v] : beta.values) {
    const auto& [j, i] = key;
    if (v < 0) fail("negative beta(" + std::to_string(j) + "," + std::to_string(i) + ")");
    if (!in(supply_jobs, j) || !in(o.alive, i)) {
      fail("beta(" + std::to_string(j) + "," + std::to_string(i) + ") outside (A\\O) x O");
      continue;
    }
    const auto r = reachable(graph, j);
    if (!in(r, i)) fail("(i) beta(" + std::to_string(j) + "," + std::to_string(i) + ") > 0 but i not in R_j");
  }
  for (JobId j : supply_jobs) {
    Rational expect = alg.instance().job(j).processing() - elapsed_work(alg, j, t);
    if (beta.row_sum(j) != expect) {
      fail("(ii) row " + std::to_string(j) + " sums to " + to_string(beta.row_sum(j)) + ", expected " +
           to_string(expect));
    }
  }
  for (JobId i : o.alive) {
    Rational cap = elapsed_work(alg, i, t);
    if (beta.column_sum(i) > cap) {
      fail("(iii) column " + std::to_string(i) + " sums to " + to_string(beta.column_sum(i)) + " above y_i(t) = " +
           to_string(cap));
    }
  }
  return report;
}

std::map<std::pair<JobId, JobId>, Rational> job_to_job_flow(const FlowNetwork& network, const FlowSolution& flow) {
  std::map<std::pair<JobId, JobId>, Rational> out;
  for (std::size_t k = 0; k < network.arcs.size(); ++k) {
    const auto& arc = network.arcs[k];
    if (network.is_job_vertex(arc.from) && network.is_dummy_vertex(arc.to) && flow.arc_flow[k] > 0) {
      out[{network.job_of(arc.from), network.job_of(arc.to)}] += flow.arc_flow[k];
    }
  }
  return out;
}

std::string check_refinement_stability(const FlowNetwork& network, const FlowSolution& flow,
                                       const ScheduleTrace& alg, const ScheduleTrace& opt) {
  const auto& times = network.discretization;
  std::vector<TimePoint> mids;
  for (std::size_t l = 0; l + 1 < times.size(); ++l) mids.push_back((times[l] + times[l + 1]) / 2);
  const FlowNetwork fine = build_flow_network(alg, opt, network.t, mids);

  // Parent interval of each refined interval.
  auto parent = [&](std::size_t fine_interval) {
    const TimePoint& lo = fine.discretization[fine_interval];
    auto it = std::upper_bound(times.begin(), times.end(), lo);
    return static_cast<std::size_t>(it - times.begin()) - 1;
  };
  std::map<std::pair<JobId, std::size_t>, std::size_t> coarse_dummy;
  for (std::size_t k = 0; k < network.dummies.size(); ++k) {
    coarse_dummy[{network.dummies[k].job, network.dummies[k].interval}] = k;
  }
  std::map<std::pair<int, int>, Rational> coarse_arc_flow;
  for (std::size_t k = 0; k < network.arcs.size(); ++k) {
    coarse_arc_flow[{network.arcs[k].from, network.arcs[k].to}] = flow.arc_flow[k];
  }

  FlowSolution moved;
  moved.arc_flow.assign(fine.arcs.size(), Rational(0));
  moved.source_flow = flow.source_flow;
  moved.sink_flow = flow.sink_flow;
  for (std::size_t k = 0; k < fine.arcs.size(); ++k) {
    const auto& arc = fine.arcs[k];
    const std::size_t fine_dummy_index =
        static_cast<std::size_t>((network.is_job_vertex(arc.from) ? arc.to : arc.from)) - 1 - fine.jobs.size();
    const auto& d = fine.dummies[fine_dummy_index];
    const std::size_t coarse_k = coarse_dummy.at({d.job, parent(d.interval)});
    const auto& cd = network.dummies[coarse_k];
    const Rational share = d.capacity / cd.capacity;
    const int coarse_v = network.dummy_vertex(coarse_k);
    if (fine.is_job_vertex(arc.from)) {
      auto it = coarse_arc_flow.find({network.job_vertex(fine.job_of(arc.from)), coarse_v});
      if (it != coarse_arc_flow.end()) moved.arc_flow[k] = it->second * share;
    } else {
      auto it = coarse_arc_flow.find({coarse_v, network.job_vertex(d.job)});
      if (it != coarse_arc_flow.end()) moved.arc_flow[k] = it->second * share;
    }
  }
  moved.value = flow.value;

  if (auto why = check_flow_feasible(fine, moved); !why.empty()) return "refined flow infeasible: " + why;
  if (job_to_job_flow(fine, moved) != job_to_job_flow(network, flow)) return "refined flow changes f(j,i)";
  const FlowSolution resolved = max_flow(fine);
  if (resolved.value != flow.value) {
    return "refined max-flow value " + to_string(resolved.value) + " differs from " + to_string(flow.value);
  }
  return {};
}

}  // namespace flowsched
