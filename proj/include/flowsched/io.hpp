#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "flowsched/instance.hpp"
#include "flowsched/trace.hpp"

namespace flowsched {

using Json = nlohmann::ordered_json;

/// Instance file format:
///   {"alpha": "1/2",
///    "jobs": [{"id": 1, "release": "0", "proc": "2"},
///             {"id": 2, "release": "0", "proc": {"deferred": 0}}],
///    "adversary": {"triggers": [{"id": 0, "fire_at": "4", "rule": "lb1", "slack": "1/4"}]}}
/// Rationals are "num/den" strings; JSON integers are accepted as shorthand.
Instance instance_from_json(const Json& doc);
Json instance_to_json(const Instance& instance);

/// Throws IoError("instance not found: ...") for a missing file.
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

class IoError : public Error {
 public:
  using Error::Error;
};

Rational rational_from_json(const Json& value);
Json rational_to_json(const Rational& value);

/// Trace CSV: start,end,job_id,rate with one row per rated job and segment.
/// Idle segments are written as a single row with an empty job_id and rate 0/1.
/// With `with_float`, decimal start/end/rate columns are appended.
std::string trace_csv(const ScheduleTrace& trace, bool with_float = false);
/// Rebuilds a trace from CSV text over a resolved instance.
ScheduleTrace trace_from_csv(const std::string& text, const Instance& instance,
                             std::map<JobId, TimePoint> commits = {});

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace flowsched
