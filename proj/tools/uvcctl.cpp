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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uvc/cli.hpp"

namespace {

template <typename T>
void optional_flag(CLI::App* app, const std::string& name, std::optional<T>& target,
                   const std::string& help) {
  app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace uvc::cli;
  CLI::App app{"Occupancy-interlocked UVC disinfection: simulate, map dose, replay logs."};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.footer(
      "Exit status: 0 ok, 1 input error, 2 safety violation, 3 dose bound missed.\n"
      "UVC_OUT_DIR sets the output directory when --out is not given.");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its artifacts");
  simulate->add_option("--scenario", sim.scenario, "Scenario JSON, or builtin:A..D / builtin:midnight")
      ->required();
  optional_flag(simulate, "--out", sim.out, "Output directory");
  optional_flag(simulate, "--seed", sim.seed, "Override the scenario seed");
  optional_flag(simulate, "--tz-offset", sim.tz_offset, "Override the local-time offset, seconds");

  DosemapOptions dm;
  auto* dosemap = app.add_subcommand("dosemap", "Floor-grid time-to-dose map");
  dosemap->add_option("--room", dm.room, "Room JSON or 'builtin'")->capture_default_str();
  dosemap->add_option("--target-dose", dm.target_dose, "Target dose, J/m^2")->capture_default_str();
  dosemap->add_option("--cycle", dm.cycle, "Cycle length, seconds")->capture_default_str();
  optional_flag(dosemap, "--out", dm.out, "Output CSV file");

  PaperSuiteOptions ps;
  auto* suite = app.add_subcommand("paper-suite", "Scenarios A-D plus the dose map");
  optional_flag(suite, "--out", ps.out, "Output directory");
  suite->add_option("--seeds", ps.seeds, "Number of seeds per scenario")->capture_default_str();
  optional_flag(suite, "--reaction-deadline", ps.reaction_deadline, "Override, seconds");
  suite->add_option("--jobs", ps.jobs, "Parallel runs")->capture_default_str();
  suite->add_flag("--strict-dose", ps.strict_dose,
                  "Require the dose bound at the configured lamp efficiency");

  ReplayOptions rp;
  auto* replay = app.add_subcommand("replay", "Feed an event log through fusion and controller");
  replay->add_option("--room", rp.room, "Room JSON or 'builtin'")->capture_default_str();
  replay->add_option("--events", rp.events, "Event log CSV")->required();
  optional_flag(replay, "--policy", rp.policy, "Cycle policy JSON");
  optional_flag(replay, "--fusion", rp.fusion, "Fusion parameter JSON");
  replay->add_option("--tick", rp.tick, "Controller step, seconds")->capture_default_str();
  optional_flag(replay, "--until", rp.until, "Last time to step, seconds");
  optional_flag(replay, "--tz-offset", rp.tz_offset, "Local-time offset, seconds");
  replay->add_option("--start", rp.start, "ISO 8601 time of t=0")->capture_default_str();
  optional_flag(replay, "--out", rp.out, "Command log CSV (stdout if omitted)");

  ValidateOptions va;
  auto* validate = app.add_subcommand("validate", "Check configuration files");
  optional_flag(validate, "--room", va.room, "Room JSON or 'builtin'");
  optional_flag(validate, "--scenario", va.scenario, "Scenario JSON or builtin:X");
  optional_flag(validate, "--policy", va.policy, "Cycle policy JSON");

  std::string room_file;
  auto* export_room = app.add_subcommand("export-room", "Write the built-in room as JSON");
  export_room->add_option("--out", room_file, "Output JSON file")->required();

  std::string scenario_name, scenario_file;
  auto* export_scenario =
      app.add_subcommand("export-scenario", "Write a built-in scenario as JSON");
  export_scenario->add_option("--name", scenario_name, "A, B, C, D or midnight")->required();
  export_scenario->add_option("--out", scenario_file, "Output JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  if (*simulate) return cmd_simulate(sim, out, err);
  if (*dosemap) return cmd_dosemap(dm, out, err);
  if (*suite) return cmd_paper_suite(ps, out, err);
  if (*replay) return cmd_replay(rp, out, err);
  if (*validate) return cmd_validate(va, out, err);
  if (*export_room) return cmd_export_room(room_file, out, err);
  if (*export_scenario) return cmd_export_scenario(scenario_name, scenario_file, out, err);
  return kExitInputError;
}
