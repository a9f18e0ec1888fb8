#pragma once

#include <string>
#include <vector>

#include "flowsched/analysis/trace_checks.hpp"
#include "flowsched/io.hpp"
#include "flowsched/trace.hpp"

namespace flowsched {

struct VerifyOptions {
  bool refinement = true;     // re-run each flow on a midpoint-refined discretization
  bool policy_checks = true;  // rule, blocking and catch-up checks on the algorithm trace
  bool cross_check_unrestricted = false;  // also solve without the demand-outflow restriction
};

struct PointReport {
  TimePoint t;
  std::size_t alive = 0;
  std::size_t opt_alive = 0;
  std::size_t nonclairvoyant_minus_opt = 0;
  std::size_t clairvoyant_minus_opt = 0;
  Rational supply;
  Rational flow_value;
  bool saturated = false;
  bool beta_ok = false;
  bool refinement_ok = true;
  std::size_t segment_count = 0;
  bool segments_ok = false;
  bool bounds_ok = false;
  bool extrapolated = false;
  Rational discarded_cycle_flow;
  bool pass = false;
};

struct VerifyReport {
  Rational alpha;
  Rational alg_flow;
  Rational opt_flow;
  std::vector<PointReport> points;
  std::vector<Violation> violations;
  std::vector<Violation> notes;  // extrapolated local-bound misses, never failures

  bool pass() const { return violations.empty(); }
};

/// All structural checks of `alg` against the reference `opt` at every
/// analysis time.
VerifyReport verify_traces(const ScheduleTrace& alg, const ScheduleTrace& opt, const VerifyOptions& options = {});

/// Runs the alpha policy (with the instance's adversary, if any) and SRPT on
/// the realized instance, then verifies.
VerifyReport verify_instance(const Instance& instance, const VerifyOptions& options = {});

Json verify_report_to_json(const VerifyReport& report);

}  // namespace flowsched
