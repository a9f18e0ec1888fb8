#include "flowsched/analysis/segments.hpp"

#include <algorithm>

#include "flowsched/analysis/borrow_graph.hpp"

namespace flowsched {

namespace {

bool contains(const std::vector<JobId>& v, JobId id) { return std::binary_search(v.begin(), v.end(), id); }

std::vector<JobId> minus(const std::vector<JobId>& a, const std::vector<JobId>& b) {
  std::vector<JobId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

SegmentPartition compute_segments(const ScheduleTrace& alg, const ScheduleTrace& opt, const TimePoint& t) {
  SegmentPartition out;
  const Partition a = partition(alg, t);
  const Partition o = partition(opt, t);
  const Rational& alpha = alg.instance().alpha().value();

  auto truncated = [&](JobId id) {
    Rational y = elapsed_work(alg, id, t);
    Rational cap = alpha * alg.instance().job(id).processing();
    return y < cap ? y : cap;
  };
  const std::vector<JobId> members = minus(a.non_clairvoyant, o.alive);
  for (JobId i : o.alive) out.truncated[i] = truncated(i);
  for (JobId j : members) out.truncated[j] = truncated(j);
  if (members.empty()) return out;

  const BorrowGraph graph = build_borrow_graph(alg, t);
  std::map<std::vector<JobId>, std::vector<JobId>> groups;
  for (JobId j : members) {
    std::vector<JobId> dom;
    std::vector<JobId> above;
    const auto r = reachable(graph, j);
    for (JobId i : o.alive) {
      if (out.truncated[j] >= out.truncated[i]) {
        dom.push_back(i);
      } else if (contains(r, i)) {
        above.push_back(i);
      }
    }
    out.dominated_by[j] = dom;
    out.above_reachable[j] = above;
    groups[dom].push_back(j);
  }

  for (auto& [dom, jobs] : groups) {
    JobSegment seg;
    seg.jobs = jobs;
    seg.dominated = dom;
    for (JobId j : jobs) {
      if (!out.above_reachable[j].empty()) seg.separated.push_back(j);
    }
    out.segments.push_back(std::move(seg));
  }
  std::sort(out.segments.begin(), out.segments.end(),
            [](const JobSegment& x, const JobSegment& y) { return x.dominated.size() < y.dominated.size(); });
  for (std::size_t k = 0; k + 1 < out.segments.size(); ++k) {
    const auto& lo = out.segments[k].dominated;
    const auto& hi = out.segments[k + 1].dominated;
    bool subset = std::includes(hi.begin(), hi.end(), lo.begin(), lo.end());
    if (!subset || lo.size() == hi.size()) out.strict_chain = false;
  }
  return out;
}

LocalBoundsReport check_local_bounds(const ScheduleTrace& alg, const ScheduleTrace& opt, const TimePoint& t,
                                     const Alpha& alpha) {
  LocalBoundsReport rep;
  const Partition a = partition(alg, t);
  const Partition o = partition(opt, t);
  rep.alive = a.alive.size();
  rep.opt_alive = o.alive.size();
  rep.alive_minus_opt = minus(a.alive, o.alive).size();
  rep.nonclairvoyant_minus_opt = minus(a.non_clairvoyant, o.alive).size();
  rep.clairvoyant_minus_opt = minus(a.clairvoyant, o.alive).size();

  auto fail = [&](std::string what) {
    rep.pass = false;
    rep.violations.push_back(std::move(what));
  };
  if (rep.opt_alive == 0 && rep.alive != 0) fail("O(t) empty but A(t) has " + std::to_string(rep.alive) + " jobs");

  if (alpha.is_one()) {
    rep.skipped = true;
    return rep;
  }
  Rational exact = Rational(1) / (Rational(1) - alpha.value());
  rep.factor = Rational(ceil_of(exact));
  rep.extrapolated = rep.factor != exact;
  const Rational o_count(static_cast<long>(rep.opt_alive));
  auto check = [&](const char* name, std::size_t lhs, const Rational& coeff) {
    if (Rational(static_cast<long>(lhs)) > coeff * o_count) {
      fail(std::string(name) + ": " + std::to_string(lhs) + " > (" + to_string(coeff) + ")*" +
           std::to_string(rep.opt_alive));
    }
  };
  check("|A\\O|", rep.alive_minus_opt, Rational(3) + 2 * rep.factor);
  check("|N\\O|", rep.nonclairvoyant_minus_opt, Rational(2) + rep.factor);
  check("|C\\O|", rep.clairvoyant_minus_opt, Rational(1) + rep.factor);
  check("|A|", rep.alive, Rational(4) + 2 * rep.factor);
  return rep;
}

}  // namespace flowsched
