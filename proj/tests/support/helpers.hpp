#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "flowsched/engine.hpp"
#include "flowsched/instance.hpp"
#include "flowsched/trace.hpp"

namespace flowsched::testing {

inline Rational q(long num, long den = 1) { return make_rational(num, den); }

/// Jobs 1..n with the given (release, processing) pairs.
inline Instance jobs_of(const std::vector<std::pair<Rational, Rational>>& rp, const Rational& alpha = q(1, 2)) {
  std::vector<Job> jobs;
  JobId id = 1;
  for (const auto& [r, p] : rp) jobs.push_back({id++, r, p});
  return Instance(std::move(jobs), Alpha(alpha));
}

inline ScheduleTrace run(const Instance& instance, PolicyKind kind) {
  const auto policy = make_policy(kind, instance.alpha());
  return simulate(instance, *policy).trace;
}

inline SimulationResult run_full(const Instance& instance, PolicyKind kind) {
  const auto policy = make_policy(kind, instance.alpha());
  return simulate(instance, *policy);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("flowsched_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace flowsched::testing
