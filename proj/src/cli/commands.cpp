#include "flowsched/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "flowsched/analysis/trace_checks.hpp"
#include "flowsched/analysis/verifier.hpp"
#include "flowsched/cli/lowerbound.hpp"
#include "flowsched/engine.hpp"
#include "flowsched/generators.hpp"
#include "flowsched/metrics.hpp"
#include "flowsched/oracle/quantum.hpp"
#include "flowsched/parallel.hpp"

namespace fs = std::filesystem;

namespace flowsched {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Common {
  bool with_float = false;
  bool quantum_oracle = false;
};

struct CorpusOptions {
  std::string instance;
  std::size_t corpus = 0;
  std::uint64_t seed = 1;
  int n = 6;
  int max_p = 8;
  std::string density = "1";
  int max_release = -1;
  std::string alpha;
};

struct NamedInstance {
  std::string id;
  Instance instance;
};

Rational parse_alpha_text(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw UsageError(std::string("bad --alpha: ") + e.what());
  }
}

// Instances from a file, a directory of *.json files, or a generated corpus.
std::vector<NamedInstance> gather(const CorpusOptions& o, bool allow_empty) {
  std::vector<NamedInstance> out;
  std::optional<Alpha> alpha;
  if (!o.alpha.empty()) alpha = Alpha(parse_alpha_text(o.alpha));
  if (!o.instance.empty() && o.corpus > 0) throw UsageError("--instance and --corpus are mutually exclusive");
  if (!o.instance.empty()) {
    const fs::path path(o.instance);
    if (fs::is_directory(path)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) out.push_back({f.stem().string(), load_instance(f)});
    } else {
      out.push_back({path.stem().string(), load_instance(path)});
    }
  } else if (o.corpus > 0) {
    RandomInstanceParams params;
    params.n = o.n;
    params.max_p = o.max_p;
    params.density = parse_rational(o.density);
    if (o.max_release >= 0) params.max_release = o.max_release;
    const auto corpus = random_corpus(o.corpus, params, alpha.value_or(Alpha()), o.seed);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      out.push_back({"seed-" + std::to_string(o.seed + i), corpus[i]});
    }
  } else if (!allow_empty) {
    throw UsageError("need --instance or --corpus");
  }
  if (alpha) {
    for (auto& item : out) item.instance = item.instance.with_alpha(*alpha);
  }
  return out;
}

void add_corpus_options(CLI::App* cmd, CorpusOptions& o) {
  cmd->add_option("--instance", o.instance, "Instance JSON file or directory of them");
  cmd->add_option("--corpus", o.corpus, "Generate this many random instances instead");
  cmd->add_option("--seed", o.seed, "First corpus seed");
  cmd->add_option("--n", o.n, "Maximum jobs per generated instance");
  cmd->add_option("--max-p", o.max_p, "Maximum processing time");
  cmd->add_option("--density", o.density, "Expected load of generated instances");
  cmd->add_option("--max-release", o.max_release, "Latest release of generated instances");
  cmd->add_option("--alpha", o.alpha, "Override alpha (num/den)");
}

std::string fmt_float(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

struct QuantumCheck {
  Rational oracle_flow;
  Rational bound;
  bool within = true;
};

QuantumCheck quantum_check(const ScheduleTrace& trace, PolicyKind policy) {
  const Rational h(1, 64);
  const ScheduleTrace q = oracle::simulate_quantum(trace.instance(), policy, h);
  QuantumCheck c;
  c.oracle_flow = total_flow_time(q);
  const auto n = static_cast<unsigned long>(trace.instance().size());
  c.bound = h * n * n;
  Rational diff = c.oracle_flow - total_flow_time(trace);
  if (diff < 0) diff = -diff;
  c.within = diff <= c.bound;
  return c;
}

// ---- simulate ----

struct SimulateOptions {
  std::string instance;
  std::string policy = "alpha";
  std::string alpha;
  std::string out;
  std::string horizon;
};

int cmd_simulate(const SimulateOptions& o, const Common& common, std::ostream& out) {
  Instance instance = load_instance(o.instance);
  if (!o.alpha.empty()) instance = instance.with_alpha(Alpha(parse_alpha_text(o.alpha)));
  const PolicyKind kind = parse_policy(o.policy);
  const auto policy = make_policy(kind, instance.alpha());
  std::optional<TimePoint> horizon;
  if (!o.horizon.empty()) horizon = parse_rational(o.horizon);
  const SimulationResult result = simulate(instance, *policy, horizon);

  Json doc = metrics_to_json(metrics(result.trace), common.with_float);
  doc["policy"] = policy_name(kind);
  doc["alpha"] = rational_to_json(instance.alpha().value());
  bool ok = true;
  if (common.quantum_oracle) {
    const QuantumCheck q = quantum_check(result.trace, kind);
    doc["quantum_oracle"] = Json{{"quantum", "1/64"},
                                 {"total_flow", rational_to_json(q.oracle_flow)},
                                 {"bound", rational_to_json(q.bound)},
                                 {"within", q.within}};
    ok = q.within;
  }
  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_file(dir / "trace.csv", trace_csv(result.trace, common.with_float));
  write_file(dir / "events.csv", event_log_csv(result.events));
  write_file(dir / "metrics.json", doc.dump(2) + "\n");
  out << "total_flow=" << to_string(total_flow_time(result.trace)) << "\n";
  if (!ok) {
    out << "quantum oracle outside bound\n";
    return kExitVerifyFailed;
  }
  return kExitPass;
}

// ---- compare ----

struct CompareOptions {
  CorpusOptions corpus;
  std::string policies = "alpha,srpt,setf";
  std::string out;
};

int cmd_compare(const CompareOptions& o, const Common& common, std::ostream& out) {
  const auto items = gather(o.corpus, false);
  std::vector<PolicyKind> kinds;
  std::stringstream list(o.policies);
  for (std::string name; std::getline(list, name, ',');) kinds.push_back(parse_policy(name));

  auto rows = parallel_map(items.size(), [&](std::size_t i) {
    const auto& item = items[i];
    SrptPolicy srpt;
    const auto opt = simulate(item.instance, srpt).trace;
    std::vector<MetricsRow> r;
    for (PolicyKind kind : kinds) {
      const auto policy = make_policy(kind, item.instance.alpha());
      const auto trace = simulate(item.instance, *policy).trace;
      const Rational opt_flow = total_flow_time(simulate(trace.instance(), srpt).trace);
      const Rational flow = total_flow_time(trace);
      r.push_back(MetricsRow{item.id, std::string(policy_name(kind)), item.instance.alpha().value(), flow,
                   opt_flow == 0 ? Rational(1) : Rational(flow / opt_flow)});
    }
    return r;
  });
  std::vector<MetricsRow> flat;
  for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  const std::string csv = metrics_csv(flat, common.with_float);
  if (o.out.empty()) out << csv;
  else write_file(o.out, csv);
  return kExitPass;
}

// ---- verify ----

struct VerifyCliOptions {
  CorpusOptions corpus;
  std::string trace_override;
  std::string out;
  bool no_refinement = false;
};

struct VerifyItem {
  std::string id;
  Instance realized;
  ScheduleTrace alg;
  VerifyReport report;
  std::optional<QuantumCheck> quantum;
  std::string error;
  bool pass() const { return error.empty() && report.pass() && (!quantum || quantum->within); }
};

int cmd_verify(const VerifyCliOptions& o, const Common& common, std::ostream& out) {
  const auto items = gather(o.corpus, false);
  if (!o.trace_override.empty() && items.size() != 1) {
    throw UsageError("--trace-override needs exactly one instance");
  }
  VerifyOptions vo;
  vo.refinement = !o.no_refinement;

  const auto results = parallel_map(items.size(), [&](std::size_t i) {
    const auto& item = items[i];
    VerifyItem v;
    v.id = item.id;
    try {
      AlphaClairvoyantPolicy policy(item.instance.alpha());
      SrptPolicy srpt;
      ScheduleTrace alg = simulate(item.instance, policy).trace;
      if (!o.trace_override.empty()) {
        alg = trace_from_csv(read_file(o.trace_override), alg.instance(), alg.commits());
      }
      const ScheduleTrace opt = simulate(alg.instance(), srpt).trace;
      v.realized = alg.instance();
      v.report = verify_traces(alg, opt, vo);
      if (common.quantum_oracle && o.trace_override.empty()) {
        v.quantum = quantum_check(alg, PolicyKind::kAlphaClairvoyant);
      }
      v.alg = std::move(alg);
    } catch (const Error& e) {
      v.error = e.what();
      v.realized = item.instance.resolved() ? item.instance : Instance();
    }
    return v;
  });

  Json doc;
  std::size_t failed = 0;
  Json list = Json::array();
  const VerifyItem* first_bad = nullptr;
  for (const auto& v : results) {
    Json entry;
    entry["id"] = v.id;
    entry["pass"] = v.pass();
    if (!v.error.empty()) {
      entry["error"] = v.error;
    } else {
      entry["report"] = verify_report_to_json(v.report);
    }
    if (v.quantum) {
      entry["quantum_oracle"] = Json{{"total_flow", rational_to_json(v.quantum->oracle_flow)},
                                     {"bound", rational_to_json(v.quantum->bound)},
                                     {"within", v.quantum->within}};
    }
    list.push_back(std::move(entry));
    if (!v.pass()) {
      ++failed;
      if (first_bad == nullptr) first_bad = &v;
    }
  }
  doc["pass"] = failed == 0;
  doc["instances"] = results.size();
  doc["failed"] = failed;
  doc["results"] = std::move(list);

  if (!o.out.empty()) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_file(dir / "report.json", doc.dump(2) + "\n");
    if (first_bad != nullptr && !first_bad->realized.empty()) {
      save_instance(first_bad->realized, dir / "counterexample.json");
      if (first_bad->error.empty()) write_file(dir / "counterexample_trace.csv", trace_csv(first_bad->alg));
    }
  }
  out << "verified " << results.size() << " instance(s), " << failed << " failed\n";
  if (first_bad != nullptr) {
    out << "first failure: " << first_bad->id;
    if (!first_bad->error.empty()) {
      out << ": " << first_bad->error;
    } else if (!first_bad->report.violations.empty()) {
      const auto& v = first_bad->report.violations.front();
      out << ": " << v.check << " at t=" << to_string(v.t) << ": " << v.detail;
    } else if (first_bad->quantum) {
      out << ": quantum oracle outside bound";
    }
    out << "\n";
    return kExitVerifyFailed;
  }
  return kExitPass;
}

// ---- lowerbound ----

struct LowerBoundCliOptions {
  std::string which = "lb1";
  std::string alpha = "1/2";
  int k = 0;
  std::string scale = "auto";
  std::size_t seeds = 1;
  std::uint64_t seed = 1;
  int dos_m = 0;
  std::string out;
};

int cmd_lowerbound(const LowerBoundCliOptions& o, const Common& common, std::ostream& out) {
  LowerBoundConfig config;
  config.which = o.which;
  config.alpha = Alpha(parse_alpha_text(o.alpha));
  config.k = o.k;
  if (o.scale != "auto") config.scale = parse_rational(o.scale);
  config.seeds = o.seeds;
  config.seed = o.seed;
  if (o.dos_m > 0) config.dos_m = o.dos_m;
  const LowerBoundResult r = run_lower_bound(config);

  const bool many = r.samples.size() > 1;
  out << "which=" << o.which << " alpha=" << to_string(config.alpha.value()) << " k=" << r.k << "\n";
  if (!many) {
    const auto& s = r.samples.front();
    out << "t=" << to_string(s.t) << " delta(t)=" << s.alive << " delta(t,1)=" << s.alive_long
        << " delta*(t)=" << s.opt_alive << "\n";
  } else {
    out << "seeds=" << r.samples.size() << " mean delta(t,1)=" << to_string(r.mean_alive_long)
        << " mean delta*(t)=" << to_string(r.mean_opt_alive);
    if (common.with_float) {
      out << " (" << fmt_float(to_double(r.mean_alive_long)) << " vs " << fmt_float(to_double(r.mean_opt_alive))
          << ")";
    }
    out << "\n";
    if (r.mean_alive_long_small) {
      out << "all-small samples=" << r.small_count << " mean delta(t,1)=" << to_string(*r.mean_alive_long_small)
          << " mean delta*(t)=" << to_string(*r.mean_opt_alive_small) << "\n";
    }
  }
  if (r.dos) {
    out << "dos M=" << r.dos->m << " flow ratio=" << to_string(r.dos->ratio) << " ("
        << fmt_float(to_double(r.dos->ratio)) << ") window ratio=" << to_string(r.dos->window_ratio) << " ("
        << fmt_float(to_double(r.dos->window_ratio)) << ")\n";
  }
  if (!o.out.empty()) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_file(dir / "lowerbound.json", lower_bound_to_json(r).dump(2) + "\n");
    save_instance(r.construction, dir / "construction.json");
    save_instance(r.alg.instance(), dir / "instance.json");
    write_file(dir / "alg_trace.csv", trace_csv(r.alg, common.with_float));
    write_file(dir / "opt_trace.csv", trace_csv(r.opt, common.with_float));
  }
  return kExitPass;
}

// ---- sweep ----

struct SweepOptions {
  CorpusOptions corpus;
  std::string grid = "1/2,2/3,3/4";
  std::string out;
};

struct SweepCell {
  std::optional<Rational> max_alive_ratio;  // max |A|/|O| over times with O nonempty
  bool alive_without_opt = false;           // some time had A nonempty and O empty
  Rational max_flow_ratio = 1;
};

int cmd_sweep(const SweepOptions& o, const Common& common, std::ostream& out) {
  std::vector<Alpha> grid;
  std::stringstream list(o.grid);
  for (std::string item; std::getline(list, item, ',');) grid.emplace_back(parse_alpha_text(item));
  CorpusOptions corpus = o.corpus;
  corpus.alpha.clear();
  const auto items = gather(corpus, true);

  std::ostringstream csv;
  csv << "alpha,instances,max_alive_ratio,max_flow_ratio,bound";
  if (common.with_float) csv << ",max_alive_ratio_f,max_flow_ratio_f";
  csv << '\n';
  if (items.empty()) {
    if (o.out.empty()) out << csv.str();
    else write_file(o.out, csv.str());
    return kExitPass;
  }
  for (const auto& alpha : grid) {
    const auto cells = parallel_map(items.size(), [&](std::size_t i) {
      const Instance inst = items[i].instance.with_alpha(alpha);
      AlphaClairvoyantPolicy policy(alpha);
      SrptPolicy srpt;
      const auto alg = simulate(inst, policy).trace;
      const auto opt = simulate(alg.instance(), srpt).trace;
      SweepCell cell;
      for (const auto& t : analysis_times(alg, opt)) {
        const std::size_t a = partition(alg, t).alive.size();
        const std::size_t b = partition(opt, t).alive.size();
        if (b == 0) {
          if (a > 0) cell.alive_without_opt = true;
          continue;
        }
        Rational r(static_cast<long>(a), static_cast<long>(b));
        if (!cell.max_alive_ratio || r > *cell.max_alive_ratio) cell.max_alive_ratio = r;
      }
      const Rational opt_flow = total_flow_time(opt);
      if (opt_flow > 0) cell.max_flow_ratio = total_flow_time(alg) / opt_flow;
      return cell;
    });
    std::optional<Rational> alive_ratio;
    bool unbounded = false;
    Rational flow_ratio = 1;
    for (const auto& c : cells) {
      unbounded = unbounded || c.alive_without_opt;
      if (c.max_alive_ratio && (!alive_ratio || *c.max_alive_ratio > *alive_ratio)) alive_ratio = c.max_alive_ratio;
      if (c.max_flow_ratio > flow_ratio) flow_ratio = c.max_flow_ratio;
    }
    const std::string alive_text = unbounded ? "inf" : (alive_ratio ? to_string(*alive_ratio) : "0/1");
    const std::string bound =
        alpha.is_one() ? "inf" : to_string(Rational(4 + 2 / (1 - alpha.value())));
    csv << to_string(alpha.value()) << ',' << items.size() << ',' << alive_text << ',' << to_string(flow_ratio)
        << ',' << bound;
    if (common.with_float) {
      csv << ',' << (unbounded ? "inf" : fmt_float(alive_ratio ? to_double(*alive_ratio) : 0.0)) << ','
          << fmt_float(to_double(flow_ratio));
    }
    csv << '\n';
  }
  if (o.out.empty()) out << csv.str();
  else write_file(o.out, csv.str());
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact fluid simulator and analysis checker for alpha-clairvoyant scheduling", "flowsched"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--float", common.with_float, "Add decimal columns next to exact values");
  app.add_flag("--quantum-oracle", common.quantum_oracle, "Cross-check against the quantum-1/64 simulator");

  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one policy on one instance");
  simulate_cmd->add_option("--instance", sim.instance, "Instance JSON")->required();
  simulate_cmd->add_option("--policy", sim.policy, "alpha, srpt or setf");
  simulate_cmd->add_option("--alpha", sim.alpha, "Override alpha (num/den)");
  simulate_cmd->add_option("--out", sim.out, "Output directory")->required();
  simulate_cmd->add_option("--horizon", sim.horizon, "Stop at this time");

  CompareOptions cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Total flow of several policies, as CSV");
  add_corpus_options(compare_cmd, cmp.corpus);
  compare_cmd->add_option("--policies", cmp.policies, "Comma-separated policy names");
  compare_cmd->add_option("--out", cmp.out, "CSV file (default: stdout)");

  VerifyCliOptions ver;
  auto* verify_cmd = app.add_subcommand("verify", "Check the structural analysis on alpha-policy schedules");
  add_corpus_options(verify_cmd, ver.corpus);
  verify_cmd->add_option("--trace-override", ver.trace_override, "Check this trace CSV instead of the simulated one");
  verify_cmd->add_option("--out", ver.out, "Directory for report.json and counterexamples");
  verify_cmd->add_flag("--no-refinement", ver.no_refinement, "Skip the refined-discretization re-check");

  LowerBoundCliOptions lb;
  auto* lb_cmd = app.add_subcommand("lowerbound", "Reproduce a lower-bound construction");
  lb_cmd->add_option("which", lb.which, "lb1, lb2, rand or rand32")->required();
  lb_cmd->add_option("--alpha", lb.alpha, "alpha (num/den)");
  lb_cmd->add_option("--k", lb.k, "Construction size");
  lb_cmd->add_option("--scale", lb.scale, "lb1 time scale, or auto");
  lb_cmd->add_option("--seeds", lb.seeds, "Number of seeds (rand, rand32)");
  lb_cmd->add_option("--seed", lb.seed, "First seed");
  lb_cmd->add_option("--dos-M", lb.dos_m, "Append M unit jobs after the measurement time");
  lb_cmd->add_option("--out", lb.out, "Output directory");

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Alive-count and flow ratios across an alpha grid");
  add_corpus_options(sweep_cmd, sw.corpus);
  sweep_cmd->add_option("--grid", sw.grid, "Comma-separated alphas");
  sweep_cmd->add_option("--out", sw.out, "CSV file (default: stdout)");

  std::vector<std::string> argv_store{"flowsched"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, common, out);
    if (*compare_cmd) return cmd_compare(cmp, common, out);
    if (*verify_cmd) return cmd_verify(ver, common, out);
    if (*lb_cmd) return cmd_lowerbound(lb, common, out);
    if (*sweep_cmd) return cmd_sweep(sw, common, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace flowsched
