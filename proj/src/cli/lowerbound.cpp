#include "flowsched/cli/lowerbound.hpp"

#include "flowsched/engine.hpp"
#include "flowsched/generators.hpp"
#include "flowsched/metrics.hpp"
#include "flowsched/parallel.hpp"

namespace flowsched {

namespace {

struct Run {
  ScheduleTrace alg;
  ScheduleTrace opt;
};

Run run_pair(const Instance& instance) {
  AlphaClairvoyantPolicy policy(instance.alpha());
  SrptPolicy srpt;
  ScheduleTrace alg = simulate(instance, policy).trace;
  ScheduleTrace opt = simulate(alg.instance(), srpt).trace;
  return {std::move(alg), std::move(opt)};
}

LowerBoundSample count(const Run& run, const TimePoint& t, std::uint64_t seed) {
  LowerBoundSample s;
  s.seed = seed;
  s.t = t;
  s.alive = delta(run.alg, t);
  s.alive_long = delta(run.alg, t, Rational(1));
  s.opt_alive = delta(run.opt, t);
  return s;
}

Rational mean(const std::vector<LowerBoundSample>& samples, std::size_t LowerBoundSample::*field, bool only_small) {
  Rational sum = 0;
  long n = 0;
  for (const auto& s : samples) {
    if (only_small && !s.small_jobs) continue;
    sum += static_cast<unsigned long>(s.*field);
    ++n;
  }
  return n == 0 ? Rational(0) : Rational(sum / n);
}

}  // namespace

LowerBoundResult run_lower_bound(const LowerBoundConfig& config) {
  LowerBoundResult result;
  result.config = config;
  const Alpha& alpha = config.alpha;

  if (config.which == "lb1" || config.which == "lb2") {
    Construction c;
    if (config.which == "lb1") {
      result.k = config.k == 0 ? 20 : config.k;
      result.scale = config.scale ? *config.scale : lb1_unit_scale(alpha);
      c = gen_det_lb1(alpha, result.k, result.scale);
    } else {
      result.k = config.k == 0 ? 5 : config.k;
      c = gen_det_lb2(alpha, result.k);
    }
    result.construction = c.instance;
    Run run = run_pair(c.instance);
    result.samples.push_back(count(run, c.measure_at, 0));
    if (config.dos_m) {
      const int m = *config.dos_m;
      Run tail = run_pair(append_dos_tail(c.instance, c.measure_at, m));
      DosOutcome d;
      d.m = m;
      d.alg_flow = total_flow_time(tail.alg);
      d.opt_flow = total_flow_time(tail.opt);
      d.ratio = d.alg_flow / d.opt_flow;
      const TimePoint end = c.measure_at + m;
      d.window_alg = integrated_alive(tail.alg, c.measure_at, end);
      d.window_opt = integrated_alive(tail.opt, c.measure_at, end);
      d.window_ratio = d.window_alg / d.window_opt;
      const auto& s = result.samples.front();
      d.predicted = Rational(static_cast<long>(s.alive + 1), static_cast<long>(s.opt_alive + 1));
      result.dos = d;
    }
    result.alg = std::move(run.alg);
    result.opt = std::move(run.opt);
  } else if (config.which == "rand" || config.which == "rand32") {
    if (config.seeds == 0) throw Error("need at least one seed");
    const bool phases = config.which == "rand32";
    if (phases) result.k = config.k == 0 ? 5 : config.k;
    else result.k = rand_lb_job_count(alpha);
    const Rational small_cap = phases ? Rational(0) : Rational(1 / (1 - alpha.value()));
    struct Item {
      Instance construction;
      LowerBoundSample sample;
      Run run;
    };
    auto items = parallel_map(config.seeds, [&](std::size_t i) {
      const std::uint64_t seed = config.seed + i;
      Construction c = phases ? gen_rand_phases(alpha, result.k, seed) : gen_rand_lb(alpha, seed);
      Item item;
      item.construction = c.instance;
      item.run = run_pair(c.instance);
      item.sample = count(item.run, c.measure_at, seed);
      if (!phases) {
        for (const auto& job : c.instance.jobs()) {
          if (job.processing() > small_cap) item.sample.small_jobs = false;
        }
      }
      return item;
    });
    for (auto& item : items) result.samples.push_back(item.sample);
    result.construction = items.front().construction;
    result.alg = std::move(items.front().run.alg);
    result.opt = std::move(items.front().run.opt);
    if (!phases) {
      for (const auto& s : result.samples) result.small_count += s.small_jobs ? 1 : 0;
      if (result.small_count > 0) {
        result.mean_alive_long_small = mean(result.samples, &LowerBoundSample::alive_long, true);
        result.mean_opt_alive_small = mean(result.samples, &LowerBoundSample::opt_alive, true);
      }
    }
  } else {
    throw Error("unknown lower bound '" + config.which + "' (expected lb1, lb2, rand or rand32)");
  }
  result.mean_alive_long = mean(result.samples, &LowerBoundSample::alive_long, false);
  result.mean_opt_alive = mean(result.samples, &LowerBoundSample::opt_alive, false);
  return result;
}

Json lower_bound_to_json(const LowerBoundResult& r) {
  Json doc;
  doc["which"] = r.config.which;
  doc["alpha"] = rational_to_json(r.config.alpha.value());
  doc["k"] = r.k;
  if (r.config.which == "lb1") doc["scale"] = rational_to_json(r.scale);
  doc["mean_delta_1"] = rational_to_json(r.mean_alive_long);
  doc["mean_delta_opt"] = rational_to_json(r.mean_opt_alive);
  if (r.mean_opt_alive != 0) doc["mean_ratio"] = rational_to_json(Rational(r.mean_alive_long / r.mean_opt_alive));
  if (r.config.which == "rand") {
    doc["small_samples"] = r.small_count;
    if (r.mean_alive_long_small) {
      doc["mean_delta_1_small"] = rational_to_json(*r.mean_alive_long_small);
      doc["mean_delta_opt_small"] = rational_to_json(*r.mean_opt_alive_small);
    }
  }
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    Json j;
    if (r.config.which == "rand" || r.config.which == "rand32") j["seed"] = s.seed;
    j["t"] = rational_to_json(s.t);
    j["delta"] = s.alive;
    j["delta_1"] = s.alive_long;
    j["delta_opt"] = s.opt_alive;
    if (r.config.which == "rand") j["small_jobs"] = s.small_jobs;
    samples.push_back(std::move(j));
  }
  doc["samples"] = std::move(samples);
  if (r.dos) {
    const auto& d = *r.dos;
    doc["dos"] = Json{{"M", d.m},
                      {"alg_total_flow", rational_to_json(d.alg_flow)},
                      {"opt_total_flow", rational_to_json(d.opt_flow)},
                      {"ratio", rational_to_json(d.ratio)},
                      {"window_alg", rational_to_json(d.window_alg)},
                      {"window_opt", rational_to_json(d.window_opt)},
                      {"window_ratio", rational_to_json(d.window_ratio)},
                      {"predicted", rational_to_json(d.predicted)}};
  }
  return doc;
}

}  // namespace flowsched
