// Copyright 2026 The uvcsafe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uvc/cli.hpp"
#include "uvc/paper_scenarios.hpp"
#include "uvc/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("uvc-cli-") + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  CmdResult run(const std::string& args, const std::string& env = "") {
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = env + " " + UVCCTL_PATH + " " + args + " >" + out.string() + " 2>" +
                            err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path dir;
};

}  // namespace

TEST_F(CliTest, HelpDocumentsEveryCommand) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* c : {"simulate", "dosemap", "paper-suite", "replay", "validate", "UVC_OUT_DIR"})
    EXPECT_NE(r.out.find(c), std::string::npos) << c;
  const auto s = run("simulate --help");
  for (const char* f : {"--scenario", "--out", "--seed", "--tz-offset"})
    EXPECT_NE(s.out.find(f), std::string::npos) << f;
}

TEST_F(CliTest, SimulateGuardedDeskPasses) {
  const auto out = dir / "b";
  const auto r = run("simulate --scenario builtin:B --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(slurp(out / "safety_report.json"));
  EXPECT_EQ(report["verdict"], "pass");
  EXPECT_TRUE(report["violations"].empty());
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["command"], "simulate");
  EXPECT_EQ(manifest["status"], "pass");
  EXPECT_EQ(manifest["seed"], 1);
  ASSERT_FALSE(manifest["outputs"].empty());
  for (const auto& f : manifest["outputs"]) EXPECT_TRUE(fs::exists(out / f.get<std::string>())) << f;
}

TEST_F(CliTest, BypassedInterlockExitsTwo) {
  auto s = uvc::paper_scenario('B');
  s.policy.test_only_bypass_interlock = true;
  const auto file = dir / "tampered.json";
  std::ofstream(file) << uvc::scenario_to_json(s).dump(2);
  const auto r = run("simulate --scenario " + file.string() + " --out " + (dir / "t").string());
  EXPECT_EQ(r.code, 2);
  const auto report = nlohmann::json::parse(slurp(dir / "t" / "safety_report.json"));
  EXPECT_EQ(report["verdict"], "fail");
  EXPECT_FALSE(report["violations"].empty());
}

TEST_F(CliTest, MissingScenarioExitsOne) {
  const auto r = run("simulate --scenario " + (dir / "nope.json").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nope.json"), std::string::npos);
}

TEST_F(CliTest, InvalidScenarioListsViolations) {
  auto j = uvc::scenario_to_json(uvc::paper_scenario('A'));
  j["tick_s"] = 0;
  const auto file = dir / "bad.json";
  std::ofstream(file) << j.dump();
  const auto r = run("simulate --scenario " + file.string() + " --out " + (dir / "x").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("tick_s"), std::string::npos);
}

TEST_F(CliTest, SameSeedIdenticalFiles) {
  const auto a = dir / "a", b = dir / "b";
  ASSERT_EQ(run("simulate --scenario builtin:D --seed 9 --out " + a.string()).code, 0);
  ASSERT_EQ(run("simulate --scenario builtin:D --seed 9 --out " + b.string()).code, 0);
  for (const char* f : {"events.csv", "snapshots.csv", "commands.csv", "probes.csv",
                        "checkpoints.csv", "timeline.csv", "safety_report.json", "dose_grid.csv"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST_F(CliTest, OutDirFromEnvironment) {
  const auto r = run("simulate --scenario builtin:B", "UVC_OUT_DIR=" + (dir / "env").string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "env" / "commands.csv"));
}

TEST_F(CliTest, DosemapDefaults) {
  const auto csv = dir / "map.csv";
  const auto r = run("dosemap --room builtin --target-dose 27 --cycle 300 --out " + csv.string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max 329.3 s"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("0.3623"), std::string::npos) << r.out;
  std::istringstream in(slurp(csv));
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 48);
  EXPECT_TRUE(fs::exists(dir / "map.manifest.json"));
}

TEST_F(CliTest, DosemapZeroTarget) {
  const auto csv = dir / "zero.csv";
  ASSERT_EQ(run("dosemap --target-dose 0 --out " + csv.string()).code, 0);
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 7u);
    EXPECT_EQ(std::stod(cols[5]), 0.0);
    ++rows;
  }
  EXPECT_EQ(rows, 48);
}

TEST_F(CliTest, DosemapWithoutLampsWarns) {
  const auto room = dir / "dark.json";
  std::ofstream(room) << R"({
    "room": {"width": 3, "length": 3, "ceiling_height": 2.5},
    "lamps": [], "desk_zones": [], "door": [1.5, 0, 0],
    "sensors": [{"id": "sw", "kind": "manual_switch", "position": [0.1, 0.1, 1.0]}]
  })";
  const auto r = run("dosemap --room " + room.string() + " --out " + (dir / "d.csv").string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("covered fraction 0.000"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, PaperSuiteVerdicts) {
  auto r = run("paper-suite --out " + (dir / "s").string());
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("scenario-A seed 1: pass"), std::string::npos);
  EXPECT_NE(r.out.find("scenario-D seed 1: pass"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "s" / "scenario-C" / "commands.csv"));
  const auto summary = nlohmann::json::parse(slurp(dir / "s" / "suite_summary.json"));
  EXPECT_EQ(summary["scenarios"].size(), 4u);

  r = run("paper-suite --strict-dose --out " + (dir / "strict").string());
  EXPECT_EQ(r.code, 3);

  r = run("paper-suite --reaction-deadline 0 --out " + (dir / "zero").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, PaperSuiteTenSeeds) {
  const auto r = run("paper-suite --seeds 10 --out " + (dir / "s").string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("seed 10: pass"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, ReplayReproducesCommands) {
  const auto out = dir / "c";
  ASSERT_EQ(run("simulate --scenario builtin:C --out " + out.string()).code, 0);
  const auto r = run("replay --room builtin --events " + (out / "events.csv").string() +
                     " --start 2020-09-01T10:10:00+08:00 --until 7200 --out " +
                     (dir / "replayed.csv").string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir / "replayed.csv"), slurp(out / "commands.csv"));
}

TEST_F(CliTest, ReplayRejectsOutOfOrderLog) {
  const auto log = dir / "bad.csv";
  std::ofstream(log) << "timestamp_s,source,kind,arg1,arg2\n5.0,pir-1,PIR,,\n4.0,pir-1,PIR,,\n";
  const auto r = run("replay --events " + log.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("pir-1"), std::string::npos);
}

TEST_F(CliTest, ValidateAndExport) {
  EXPECT_EQ(run("validate --room builtin --scenario builtin:C").code, 0);
  const auto room = dir / "room.json";
  ASSERT_EQ(run("export-room --out " + room.string()).code, 0);
  EXPECT_EQ(run("validate --room " + room.string()).code, 0);
  auto j = nlohmann::json::parse(slurp(room));
  j["lamps"][0]["uvc_efficiency"] = 0;
  std::ofstream(room) << j.dump();
  const auto r = run("validate --room " + room.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("lamps[0].uvc_efficiency"), std::string::npos);
  const auto scen = dir / "a.json";
  ASSERT_EQ(run("export-scenario --name A --out " + scen.string()).code, 0);
  EXPECT_EQ(run("validate --scenario " + scen.string()).code, 0);
}

TEST_F(CliTest, UnknownFlagIsInputError) {
  EXPECT_EQ(run("simulate --scenario builtin:A --bogus").code, 1);
  EXPECT_EQ(run("").code, 1);
}
