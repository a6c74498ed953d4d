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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uvc/simulator.hpp"

namespace uvc {

void write_events_csv(std::ostream& out, const Timeline& tl);
void write_snapshots_csv(std::ostream& out, const Timeline& tl);
void write_probes_csv(std::ostream& out, const Timeline& tl);
void write_checkpoints_csv(std::ostream& out, const Timeline& tl);

/// One row per event, snapshot change and command, in time order:
/// `timestamp_s,record,subject,value,detail`.
void write_merged_timeline_csv(std::ostream& out, const Timeline& tl);

nlohmann::json safety_report_json(const SafetyReport& report, const Scenario& scenario);

/// Writes every timeline artifact plus the safety report and the final dose
/// grid into `dir`. Returns the file names written.
std::vector<std::string> write_run_artifacts(const std::filesystem::path& dir,
                                             const SimulationResult& result,
                                             const Scenario& scenario);

}  // namespace uvc
