#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowsched/io.hpp"
#include "flowsched/trace.hpp"

namespace flowsched {

struct LowerBoundConfig {
  std::string which = "lb1";  // lb1 | lb2 | rand | rand32
  Alpha alpha;
  int k = 0;                     // 0 picks the default for `which`
  std::optional<Rational> scale; // lb1 only; empty means the unit scale
  std::size_t seeds = 1;         // rand, rand32
  std::uint64_t seed = 1;
  std::optional<int> dos_m;      // lb1, lb2: append M unit jobs after t
};

struct LowerBoundSample {
  std::uint64_t seed = 0;
  TimePoint t;
  std::size_t alive = 0;        // delta(t)
  std::size_t alive_long = 0;   // delta(t, 1)
  std::size_t opt_alive = 0;    // delta*(t)
  bool small_jobs = true;       // every p_j <= 1/(1 - alpha) (rand only)
};

struct DosOutcome {
  int m = 0;
  Rational alg_flow;
  Rational opt_flow;
  Rational ratio;
  Rational window_alg;  // integral of |A| over [t, t + M]
  Rational window_opt;
  Rational window_ratio;
  Rational predicted;   // (delta(t) + 1) / (delta*(t) + 1)
};

struct LowerBoundResult {
  LowerBoundConfig config;
  int k = 0;
  Rational scale;
  std::vector<LowerBoundSample> samples;
  Rational mean_alive_long;
  Rational mean_opt_alive;
  std::size_t small_count = 0;  // samples inside the event "all p_j small"
  std::optional<Rational> mean_alive_long_small;
  std::optional<Rational> mean_opt_alive_small;
  std::optional<DosOutcome> dos;
  Instance construction;  // first sample, adversary script included
  ScheduleTrace alg;
  ScheduleTrace opt;
};

/// Builds the construction, runs the alpha policy against it and SRPT on the
/// realized instance, and counts alive jobs at the measurement time.
LowerBoundResult run_lower_bound(const LowerBoundConfig& config);

Json lower_bound_to_json(const LowerBoundResult& result);

}  // namespace flowsched
