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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uvc/room.hpp"
#include "uvc/scenario.hpp"

namespace uvc::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "UVC_OUT_DIR";

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitSafetyViolation = 2,
  kExitDoseBoundMissed = 3,
};

struct RunManifest {
  std::string command;
  std::vector<std::string> config_paths;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir;
  std::string tool_version = kToolVersion;
  std::string started_at;  // wall clock, UTC
  std::vector<std::string> outputs;
  std::string status = "running";

  nlohmann::json to_json() const;
};

void write_manifest(const std::filesystem::path& file, const RunManifest& m);

/// `--out` when given, else $UVC_OUT_DIR, else `fallback`.
std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag,
                                      const std::filesystem::path& fallback);

/// `builtin` or a JSON file.
RoomModel load_room_arg(const std::string& arg);
/// `builtin:A`..`builtin:D`, `builtin:midnight`, or a JSON file.
Scenario load_scenario_arg(const std::string& arg);

struct SimulateOptions {
  std::string scenario;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tz_offset;
};
int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err);

struct DosemapOptions {
  std::string room = "builtin";
  double target_dose = 27.0;
  double cycle = 300.0;
  std::optional<std::filesystem::path> out;  // CSV file
};
int cmd_dosemap(const DosemapOptions& o, std::ostream& out, std::ostream& err);

struct PaperSuiteOptions {
  std::optional<std::filesystem::path> out;
  unsigned seeds = 1;
  std::optional<double> reaction_deadline;
  unsigned jobs = 1;
  bool strict_dose = false;
};
int cmd_paper_suite(const PaperSuiteOptions& o, std::ostream& out, std::ostream& err);

struct ReplayOptions {
  std::string room = "builtin";
  std::filesystem::path events;
  std::optional<std::filesystem::path> policy;
  std::optional<std::filesystem::path> fusion;
  double tick = 0.1;
  std::optional<double> until;
  std::optional<double> tz_offset;
  std::string start = "1970-01-01T00:00:00Z";
  std::optional<std::filesystem::path> out;
};
int cmd_replay(const ReplayOptions& o, std::ostream& out, std::ostream& err);

struct ValidateOptions {
  std::optional<std::string> room;
  std::optional<std::string> scenario;
  std::optional<std::filesystem::path> policy;
};
int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err);

int cmd_export_room(const std::filesystem::path& file, std::ostream& out, std::ostream& err);
int cmd_export_scenario(const std::string& name, const std::filesystem::path& file,
                        std::ostream& out, std::ostream& err);

}  // namespace uvc::cli
