#include <doctest.h>

#include <fstream>
#include <sstream>

#include "flowsched/cli/commands.hpp"
#include "flowsched/io.hpp"
#include "helpers.hpp"

using namespace flowsched;
using namespace flowsched::testing;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kData = FLOWSCHED_TEST_DATA;

}  // namespace

TEST_CASE("simulate writes the trace, events and metrics") {
  const auto dir = scratch_dir("cli_sim");
  const auto r = cli({"simulate", "--instance", kData + "/setf_pair.json", "--policy", "setf", "--out", dir.string()});
  CHECK(r.code == kExitPass);
  CHECK(r.out == "total_flow=8/1\n");
  for (const char* f : {"trace.csv", "events.csv", "metrics.json"}) CHECK(std::filesystem::exists(dir / f));
  const Json m = Json::parse(read_file((dir / "metrics.json").string()));
  CHECK(m["total_flow"] == "8/1");

  const auto again = scratch_dir("cli_sim2");
  cli({"simulate", "--instance", kData + "/setf_pair.json", "--policy", "setf", "--out", again.string()});
  for (const char* f : {"trace.csv", "events.csv", "metrics.json"}) {
    CHECK(read_file((dir / f).string()) == read_file((again / f).string()));
  }
}

TEST_CASE("usage and input errors exit 2") {
  const auto dir = scratch_dir("cli_err");
  auto r = cli({"simulate", "--instance", kData + "/no_such.json", "--out", dir.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("instance not found") != std::string::npos);
  CHECK(cli({"simulate", "--out", dir.string()}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"simulate", "--instance", kData + "/setf_pair.json", "--policy", "lifo", "--out", dir.string()}).code ==
        kExitUsage);
  CHECK(cli({"--help"}).code == kExitPass);
}

TEST_CASE("compare prints a CSV") {
  const auto r = cli({"compare", "--instance", kData + "/setf_pair.json", "--policies", "alpha,srpt,setf"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.rfind("instance_id,policy,alpha,total_flow,ratio\n", 0) == 0);
  CHECK(r.out.find(",setf,1/2,8/1,4/3\n") != std::string::npos);
  CHECK(r.out.find(",srpt,1/2,6/1,1/1\n") != std::string::npos);
}

TEST_CASE("verify a generated corpus") {
  const auto dir = scratch_dir("cli_verify");
  const auto r = cli({"verify", "--corpus", "30", "--seed", "4", "--alpha", "2/3", "--out", dir.string()});
  CHECK(r.code == kExitPass);
  CHECK(r.out == "verified 30 instance(s), 0 failed\n");
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK_FALSE(std::filesystem::exists(dir / "counterexample.json"));
}

TEST_CASE("verify rejects a schedule the policy cannot produce") {
  const auto dir = scratch_dir("cli_bad");
  const auto bad = dir / "bad_trace.csv";
  std::ofstream(bad) << "start,end,job_id,rate\n0/1,2/1,1,1/1\n2/1,4/1,2,1/1\n";
  const auto r = cli({"verify", "--instance", kData + "/setf_pair.json", "--trace-override", bad.string(), "--out",
                      dir.string()});
  CHECK(r.code == kExitVerifyFailed);
  CHECK(r.out.find("1 failed") != std::string::npos);
  CHECK(r.out.find("setf-like") != std::string::npos);
  REQUIRE(std::filesystem::exists(dir / "counterexample.json"));
  CHECK(std::filesystem::exists(dir / "counterexample_trace.csv"));

  // The saved counterexample reproduces the failure on its own.
  const auto rerun = cli({"verify", "--instance", (dir / "counterexample.json").string(), "--trace-override",
                          (dir / "counterexample_trace.csv").string()});
  CHECK(rerun.code == kExitVerifyFailed);
}

TEST_CASE("lowerbound reports counts") {
  const auto dir = scratch_dir("cli_lb");
  const auto r = cli({"lowerbound", "lb1", "--alpha", "1/2", "--k", "4", "--out", dir.string()});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("which=lb1 alpha=1/2 k=4\n") == 0);
  CHECK(r.out.find("delta(t,1)=4") != std::string::npos);
  for (const char* f : {"lowerbound.json", "construction.json", "instance.json", "alg_trace.csv", "opt_trace.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  const Json doc = Json::parse(read_file((dir / "lowerbound.json").string()));
  CHECK(doc["samples"][0]["delta_1"] == 4);
  CHECK(doc["mean_delta_opt"] == "3/1");
  CHECK(cli({"lowerbound", "lb9"}).code == kExitUsage);
}

TEST_CASE("sweep") {
  const auto empty = scratch_dir("cli_sweep_empty");
  auto r = cli({"sweep", "--instance", empty.string()});
  CHECK(r.code == kExitPass);
  CHECK(r.out == "alpha,instances,max_alive_ratio,max_flow_ratio,bound\n");

  r = cli({"sweep", "--grid", "0", "--corpus", "10", "--seed", "2"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("\n0/1,10,1/1,1/1,") != std::string::npos);
  r = cli({"sweep", "--grid", "1", "--corpus", "5"});
  CHECK(r.out.find(",inf\n") != std::string::npos);
}
