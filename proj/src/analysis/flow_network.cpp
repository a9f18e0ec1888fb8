#include "flowsched/analysis/flow_network.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace flowsched {

int FlowNetwork::job_vertex(JobId id) const {
  auto it = std::lower_bound(jobs.begin(), jobs.end(), id);
  if (it == jobs.end() || *it != id) throw Error("job " + std::to_string(id) + " not in flow network");
  return static_cast<int>(1 + (it - jobs.begin()));
}

JobId FlowNetwork::job_of(int v) const {
  if (is_job_vertex(v)) return jobs[static_cast<std::size_t>(v - 1)];
  if (is_dummy_vertex(v)) return dummies[static_cast<std::size_t>(v - 1) - jobs.size()].job;
  throw Error("vertex " + std::to_string(v) + " is not a job or dummy vertex");
}

std::string FlowNetwork::vertex_name(int v) const {
  if (v == source()) return "s";
  if (v == sink()) return "t";
  if (is_job_vertex(v)) return "j" + std::to_string(job_of(v));
  const auto& d = dummies[static_cast<std::size_t>(v - 1) - jobs.size()];
  return "v" + std::to_string(d.job) + "_" + std::to_string(d.interval);
}

Rational FlowNetwork::total_supply() const {
  Rational sum = 0;
  for (const auto& [id, value] : supply) sum += value;
  return sum;
}

Rational FlowNetwork::total_demand() const {
  Rational sum = 0;
  for (const auto& [id, value] : demand) sum += value;
  return sum;
}

FlowNetwork build_flow_network(const ScheduleTrace& alg, const ScheduleTrace& opt, const TimePoint& t,
                               std::span<const TimePoint> extra_times) {
  FlowNetwork net;
  net.t = t;

  std::vector<TimePoint> times{TimePoint(0), t};
  for (const auto& job : alg.instance().jobs()) {
    if (job.release <= t) {
      net.jobs.push_back(job.id);
      times.push_back(job.release);
    }
  }
  for (const auto& [id, c] : alg.completions()) {
    if (c <= t) times.push_back(c);
  }
  for (const auto& x : extra_times) {
    if (x >= 0 && x <= t) times.push_back(x);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  net.discretization = times;
  std::sort(net.jobs.begin(), net.jobs.end());

  const Partition alg_now = partition(alg, t);
  const Partition opt_now = partition(opt, t);
  net.opt_alive = opt_now.alive;
  auto in_opt = [&](JobId id) {
    return std::binary_search(net.opt_alive.begin(), net.opt_alive.end(), id);
  };
  for (JobId j : alg_now.alive) {
    if (!in_opt(j)) net.supply[j] = alg.instance().job(j).processing() - elapsed_work(alg, j, t);
  }
  for (JobId i : net.opt_alive) {
    if (alg.instance().job(i).release <= t) net.demand[i] = elapsed_work(alg, i, t);
  }

  // Dummies, ordered by (job, interval).
  for (JobId i : net.jobs) {
    for (std::size_t l = 0; l + 1 < times.size(); ++l) {
      Rational q = elapsed_work(alg, i, times[l + 1]) - elapsed_work(alg, i, times[l]);
      if (q > 0) net.dummies.push_back({i, l, q});
    }
  }

  net.infinite_capacity = net.total_supply() + net.total_demand() + 1;

  // Lifetime windows in the algorithm schedule.
  std::map<JobId, std::pair<TimePoint, TimePoint>> window;
  for (JobId j : net.jobs) {
    TimePoint hi = t;
    if (auto c = alg.completion(j); c && *c < hi) hi = *c;
    window[j] = {alg.instance().job(j).release, hi};
  }

  for (JobId j : net.jobs) {
    const auto& [lo, hi] = window[j];
    for (std::size_t k = 0; k < net.dummies.size(); ++k) {
      const auto& d = net.dummies[k];
      if (d.job == j) continue;
      if (lo <= times[d.interval] && times[d.interval + 1] <= hi) {
        net.arcs.push_back({net.job_vertex(j), net.dummy_vertex(k), net.infinite_capacity, true});
      }
    }
  }
  for (std::size_t k = 0; k < net.dummies.size(); ++k) {
    const auto& d = net.dummies[k];
    net.arcs.push_back({net.dummy_vertex(k), net.job_vertex(d.job), d.capacity, false});
  }
  std::sort(net.arcs.begin(), net.arcs.end(), [](const FlowArc& a, const FlowArc& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  return net;
}

namespace {

// Dinic's algorithm over exact rationals.
class Dinic {
 public:
  explicit Dinic(int n) : graph_(static_cast<std::size_t>(n)), level_(static_cast<std::size_t>(n)),
                          next_(static_cast<std::size_t>(n)) {}

  std::size_t add_edge(int from, int to, const Rational& cap) {
    auto& fwd = graph_[static_cast<std::size_t>(from)];
    auto& bwd = graph_[static_cast<std::size_t>(to)];
    fwd.push_back({to, bwd.size(), cap, cap});
    bwd.push_back({from, fwd.size() - 1, Rational(0), Rational(0)});
    handles_.push_back({from, fwd.size() - 1});
    return handles_.size() - 1;
  }

  Rational run(int s, int t) {
    Rational total = 0;
    while (bfs(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      for (;;) {
        Rational pushed = dfs(s, t, std::nullopt);
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

  Rational flow_on(std::size_t handle) const {
    const auto& [from, idx] = handles_[handle];
    const auto& e = graph_[static_cast<std::size_t>(from)][idx];
    return Rational(e.original - e.residual);
  }

 private:
  struct Edge {
    int to;
    std::size_t rev;
    Rational residual;
    Rational original;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    level_[static_cast<std::size_t>(s)] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (const auto& e : graph_[static_cast<std::size_t>(u)]) {
        if (e.residual > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(u)] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  // `limit` empty means unbounded (only at the source).
  Rational dfs(int u, int t, const std::optional<Rational>& limit) {
    if (u == t) return limit ? *limit : Rational(0);
    auto& edges = graph_[static_cast<std::size_t>(u)];
    for (std::size_t& i = next_[static_cast<std::size_t>(u)]; i < edges.size(); ++i) {
      Edge& e = edges[i];
      if (!(e.residual > 0) || level_[static_cast<std::size_t>(e.to)] != level_[static_cast<std::size_t>(u)] + 1) {
        continue;
      }
      Rational cap = limit && *limit < e.residual ? *limit : e.residual;
      Rational got = dfs(e.to, t, cap);
      if (got > 0) {
        e.residual -= got;
        graph_[static_cast<std::size_t>(e.to)][e.rev].residual += got;
        return got;
      }
    }
    return Rational(0);
  }

  std::vector<std::vector<Edge>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  std::vector<std::pair<int, std::size_t>> handles_;
};

}  // namespace

FlowSolution max_flow(const FlowNetwork& network, bool restrict_demand_outflow) {
  Dinic dinic(network.vertex_count());
  std::map<JobId, std::size_t> source_handles;
  std::map<JobId, std::size_t> sink_handles;
  std::vector<std::optional<std::size_t>> arc_handles(network.arcs.size());

  for (const auto& [id, value] : network.supply) {
    if (value > 0) source_handles[id] = dinic.add_edge(network.source(), network.job_vertex(id), value);
  }
  for (std::size_t k = 0; k < network.arcs.size(); ++k) {
    const auto& arc = network.arcs[k];
    if (restrict_demand_outflow && network.is_job_vertex(arc.from) &&
        network.demand.count(network.job_of(arc.from)) != 0) {
      continue;
    }
    arc_handles[k] = dinic.add_edge(arc.from, arc.to, arc.capacity);
  }
  for (const auto& [id, value] : network.demand) {
    if (value > 0) sink_handles[id] = dinic.add_edge(network.job_vertex(id), network.sink(), value);
  }

  FlowSolution sol;
  sol.value = dinic.run(network.source(), network.sink());
  sol.saturated = sol.value == network.total_supply();
  sol.arc_flow.resize(network.arcs.size());
  for (std::size_t k = 0; k < network.arcs.size(); ++k) {
    sol.arc_flow[k] = arc_handles[k] ? dinic.flow_on(*arc_handles[k]) : Rational(0);
  }
  for (const auto& [id, value] : network.supply) {
    sol.source_flow[id] = source_handles.count(id) ? dinic.flow_on(source_handles[id]) : Rational(0);
  }
  for (const auto& [id, value] : network.demand) {
    sol.sink_flow[id] = sink_handles.count(id) ? dinic.flow_on(sink_handles[id]) : Rational(0);
  }
  return sol;
}

std::string check_flow_feasible(const FlowNetwork& network, const FlowSolution& flow) {
  if (flow.arc_flow.size() != network.arcs.size()) return "arc flow size mismatch";
  std::vector<Rational> balance(static_cast<std::size_t>(network.vertex_count()), Rational(0));
  for (std::size_t k = 0; k < network.arcs.size(); ++k) {
    const auto& arc = network.arcs[k];
    const Rational& f = flow.arc_flow[k];
    if (f < 0) return "negative flow on " + network.vertex_name(arc.from) + "->" + network.vertex_name(arc.to);
    if (!arc.infinite && f > arc.capacity) {
      return "capacity exceeded on " + network.vertex_name(arc.from) + "->" + network.vertex_name(arc.to);
    }
    balance[static_cast<std::size_t>(arc.from)] -= f;
    balance[static_cast<std::size_t>(arc.to)] += f;
  }
  for (const auto& [id, f] : flow.source_flow) {
    auto it = network.supply.find(id);
    if (it == network.supply.end() || f < 0 || f > it->second) return "bad source flow into j" + std::to_string(id);
    balance[static_cast<std::size_t>(network.job_vertex(id))] += f;
  }
  for (const auto& [id, f] : flow.sink_flow) {
    auto it = network.demand.find(id);
    if (it == network.demand.end() || f < 0 || f > it->second) return "bad sink flow from j" + std::to_string(id);
    balance[static_cast<std::size_t>(network.job_vertex(id))] -= f;
  }
  for (int v = 1; v < network.sink(); ++v) {
    if (balance[static_cast<std::size_t>(v)] != 0) return "conservation violated at " + network.vertex_name(v);
  }
  return {};
}

std::vector<std::pair<JobId, JobId>> job_adjacency(const FlowNetwork& network) {
  std::vector<std::pair<JobId, JobId>> out;
  for (const auto& arc : network.arcs) {
    if (network.is_job_vertex(arc.from) && network.is_dummy_vertex(arc.to)) {
      out.emplace_back(network.job_of(arc.from), network.job_of(arc.to));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace flowsched
