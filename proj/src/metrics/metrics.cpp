#include "flowsched/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace flowsched {

std::vector<DeltaStep> delta_curve(const ScheduleTrace& trace) {
  std::set<TimePoint> times{TimePoint(0)};
  for (const auto& j : trace.instance().jobs()) times.insert(j.release);
  for (const auto& [id, c] : trace.completions()) times.insert(c);
  std::vector<DeltaStep> curve;
  for (const auto& t : times) {
    std::size_t count = partition(trace, t).alive.size();
    if (!curve.empty() && curve.back().count == count) continue;
    curve.push_back({t, count});
  }
  return curve;
}

Rational integrated_alive(const ScheduleTrace& trace) {
  const auto curve = delta_curve(trace);
  const TimePoint end = trace.makespan();
  Rational sum = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve[i].start < end)) break;
    const TimePoint& hi = (i + 1 < curve.size() && curve[i + 1].start < end) ? curve[i + 1].start : end;
    sum += Rational(hi - curve[i].start) * static_cast<unsigned long>(curve[i].count);
  }
  return sum;
}

Rational integrated_alive(const ScheduleTrace& trace, const TimePoint& lo, const TimePoint& hi) {
  const auto curve = delta_curve(trace);
  Rational sum = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const TimePoint& a = curve[i].start < lo ? lo : curve[i].start;
    TimePoint b = i + 1 < curve.size() ? curve[i + 1].start : hi;
    if (hi < b) b = hi;
    if (a < b) sum += Rational(b - a) * static_cast<unsigned long>(curve[i].count);
  }
  return sum;
}

Rational total_flow_time(const ScheduleTrace& trace) {
  if (!trace.all_completed()) return integrated_alive(trace);
  Rational sum = 0;
  for (const auto& [id, c] : trace.completions()) sum += c - trace.instance().job(id).release;
  return sum;
}

std::size_t delta(const ScheduleTrace& trace, const TimePoint& t,
                  const std::optional<Duration>& min_remaining) {
  const auto alive = partition(trace, t).alive;
  if (!min_remaining) return alive.size();
  std::size_t count = 0;
  for (JobId id : alive) {
    if (remaining(trace, id, t) >= *min_remaining) ++count;
  }
  return count;
}

MetricsReport metrics(const ScheduleTrace& trace) {
  MetricsReport r;
  r.complete = trace.all_completed();
  r.total_flow = total_flow_time(trace);
  for (const auto& [id, c] : trace.completions()) {
    r.per_job_flow[id] = c - trace.instance().job(id).release;
  }
  r.makespan = trace.makespan();
  r.delta_curve = delta_curve(trace);
  return r;
}

Rational ratio(const MetricsReport& alg, const MetricsReport& opt) {
  if (opt.total_flow == 0) throw Error("ratio undefined: optimal flow time is zero");
  return alg.total_flow / opt.total_flow;
}

Json metrics_to_json(const MetricsReport& report, bool with_float) {
  Json doc;
  doc["complete"] = report.complete;
  doc["total_flow"] = rational_to_json(report.total_flow);
  if (with_float) doc["total_flow_f"] = to_double(report.total_flow);
  doc["makespan"] = rational_to_json(report.makespan);
  Json per_job = Json::object();
  for (const auto& [id, f] : report.per_job_flow) per_job[std::to_string(id)] = rational_to_json(f);
  doc["per_job_flow"] = std::move(per_job);
  Json curve = Json::array();
  for (const auto& s : report.delta_curve) {
    curve.push_back(Json{{"start", rational_to_json(s.start)}, {"alive", s.count}});
  }
  doc["delta_curve"] = std::move(curve);
  return doc;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows, bool with_float) {
  std::ostringstream out;
  out << "instance_id,policy,alpha,total_flow,ratio";
  if (with_float) out << ",total_flow_f,ratio_f";
  out << '\n';
  for (const auto& r : rows) {
    out << r.instance_id << ',' << r.policy << ',' << to_string(r.alpha) << ',' << to_string(r.total_flow)
        << ',' << to_string(r.ratio);
    if (with_float) out << std::setprecision(12) << ',' << to_double(r.total_flow) << ',' << to_double(r.ratio);
    out << '\n';
  }
  return out.str();
}

}  // namespace flowsched
