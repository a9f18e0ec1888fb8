#include "flowsched/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace flowsched {

Rational rational_from_json(const Json& value) {
  if (value.is_number_integer()) return Rational(Integer(value.dump()));
  if (value.is_string()) return parse_rational(value.get<std::string>());
  throw Error("expected a rational (\"num/den\" string or integer), got " + value.dump());
}

Json rational_to_json(const Rational& value) { return to_string(value); }

namespace {

const Json& member(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

CommitRule rule_from_json(const Json& t) {
  CommitRule rule;
  rule.kind = parse_rule_name(member(t, "rule").get<std::string>());
  switch (rule.kind) {
    case CommitRule::Kind::kScaledWork: rule.slack = rational_from_json(member(t, "slack")); break;
    case CommitRule::Kind::kPhasePair: rule.length = rational_from_json(member(t, "length")); break;
    case CommitRule::Kind::kFixed:
      for (const auto& [key, v] : member(t, "values").items()) {
        rule.values[std::stoi(key)] = rational_from_json(v);
      }
      break;
  }
  return rule;
}

Json rule_to_json(const Trigger& trigger) {
  Json t;
  t["id"] = trigger.id;
  t["fire_at"] = rational_to_json(trigger.fire_at);
  t["rule"] = rule_name(trigger.rule.kind);
  switch (trigger.rule.kind) {
    case CommitRule::Kind::kScaledWork: t["slack"] = rational_to_json(trigger.rule.slack); break;
    case CommitRule::Kind::kPhasePair: t["length"] = rational_to_json(trigger.rule.length); break;
    case CommitRule::Kind::kFixed: {
      Json values = Json::object();
      for (const auto& [id, p] : trigger.rule.values) values[std::to_string(id)] = rational_to_json(p);
      t["values"] = values;
      break;
    }
  }
  return t;
}

}  // namespace

Instance instance_from_json(const Json& doc) {
  Alpha alpha(rational_from_json(member(doc, "alpha")));
  std::vector<Job> jobs;
  for (const auto& j : member(doc, "jobs")) {
    Job job;
    job.id = member(j, "id").get<int>();
    job.release = rational_from_json(member(j, "release"));
    const Json& proc = member(j, "proc");
    if (proc.is_object()) {
      job.proc = Deferred{member(proc, "deferred").get<int>()};
    } else {
      job.proc = rational_from_json(proc);
    }
    jobs.push_back(std::move(job));
  }
  std::optional<AdversaryScript> script;
  if (doc.contains("adversary") && !doc.at("adversary").is_null()) {
    AdversaryScript s;
    for (const auto& t : member(doc.at("adversary"), "triggers")) {
      s.triggers.push_back({member(t, "id").get<int>(), rational_from_json(member(t, "fire_at")),
                            rule_from_json(t)});
    }
    script = std::move(s);
  }
  return Instance(std::move(jobs), std::move(alpha), std::move(script));
}

Json instance_to_json(const Instance& instance) {
  Json doc;
  doc["alpha"] = rational_to_json(instance.alpha().value());
  Json jobs = Json::array();
  for (const auto& j : instance.jobs()) {
    Json e;
    e["id"] = j.id;
    e["release"] = rational_to_json(j.release);
    if (j.committed()) {
      e["proc"] = rational_to_json(j.processing());
    } else {
      e["proc"] = Json{{"deferred", std::get<Deferred>(j.proc).trigger}};
    }
    jobs.push_back(std::move(e));
  }
  doc["jobs"] = std::move(jobs);
  if (instance.adversary()) {
    Json triggers = Json::array();
    for (const auto& t : instance.adversary()->triggers) triggers.push_back(rule_to_json(t));
    doc["adversary"] = Json{{"triggers", std::move(triggers)}};
  }
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

Instance load_instance(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("instance not found: " + path.string());
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed instance file " + path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  write_file(path, instance_to_json(instance).dump(2) + "\n");
}

std::string trace_csv(const ScheduleTrace& trace, bool with_float) {
  std::ostringstream out;
  out << "start,end,job_id,rate";
  if (with_float) out << ",start_f,end_f,rate_f";
  out << '\n';
  auto row = [&](const ExecutionSegment& s, const std::string& id, const Rational& rate) {
    out << to_string(s.start) << ',' << to_string(s.end) << ',' << id << ',' << to_string(rate);
    if (with_float) {
      out << std::setprecision(12) << ',' << to_double(s.start) << ',' << to_double(s.end) << ','
          << to_double(rate);
    }
    out << '\n';
  };
  for (const auto& s : trace.segments()) {
    if (s.idle()) {
      row(s, "", Rational(0));
      continue;
    }
    for (const auto& [id, rate] : s.rates) row(s, std::to_string(id), rate);
  }
  return out.str();
}

ScheduleTrace trace_from_csv(const std::string& text, const Instance& instance,
                             std::map<JobId, TimePoint> commits) {
  std::istringstream in(text);
  std::string line;
  std::vector<ExecutionSegment> segments;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("start,end,job_id,rate", 0) != 0) throw Error("trace CSV: unexpected header");
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() < 4) throw Error("trace CSV: short row '" + line + "'");
    TimePoint start = parse_rational(cells[0]);
    TimePoint end = parse_rational(cells[1]);
    if (segments.empty() || segments.back().start != start || segments.back().end != end) {
      segments.push_back({start, end, {}});
    }
    if (!cells[2].empty()) {
      segments.back().rates.emplace_back(std::stoi(cells[2]), parse_rational(cells[3]));
    }
  }
  return ScheduleTrace(instance, std::move(segments), std::move(commits));
}

}  // namespace flowsched
