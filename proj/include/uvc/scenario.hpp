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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uvc/controller.hpp"
#include "uvc/fusion.hpp"
#include "uvc/room.hpp"

namespace uvc {

struct Waypoint {
  double time = 0.0;  // s since scenario start
  Point3 position;
  bool inside_room = true;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// A scripted walk. Positions are linearly interpolated between waypoints
/// and held constant before the first and after the last.
struct OccupantScript {
  std::string occupant_id;
  bool carries_beacon = false;
  std::vector<Waypoint> waypoints;

  Point3 position_at(double t) const;

  /// Segments joining two inside (or two outside) waypoints take that flag;
  /// a segment that crosses the envelope is inside wherever it lies within
  /// the room's floor plan.
  bool inside_at(double t, const RoomModel& room) const;

  friend bool operator==(const OccupantScript&, const OccupantScript&) = default;
};

struct NoiseParams {
  double rssi_sigma_db = 0.0;
  double pir_miss_probability = 0.0;
  /// Spurious detections per PIR/ultrasonic sensor per hour (Poisson).
  double false_positive_rate_per_hour = 0.0;

  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

struct SensorModelParams {
  double pir_speed_threshold = 0.1;  // m/s
  double ble_advert_period = 1.0;    // s
  double chest_height = 1.1;         // m, exposure evaluation height
  double probe_height = 0.7;         // m, virtual irradiance meters

  friend bool operator==(const SensorModelParams&, const SensorModelParams&) = default;
};

struct Scenario {
  std::string name;
  RoomModel room;
  CyclePolicy policy;
  FusionParams fusion;
  std::vector<OccupantScript> occupants;
  /// Calendar anchor: UTC Unix seconds at simulation time 0.
  double start_epoch = 0.0;
  double duration = 7200.0;  // s
  double tick = 0.1;         // s
  std::uint64_t seed = 1;
  NoiseParams noise;
  SensorModelParams models;
  /// Extra events fed to fusion verbatim (timestamps relative to start).
  std::vector<SensorEvent> injected_events;
  double checkpoint_interval = 600.0;  // s

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

std::vector<Violation> validate(const Scenario& scenario);

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM)`. Returns UTC Unix
/// seconds and writes the zone offset, in seconds, to `*offset` if given.
double parse_iso8601(std::string_view text, double* offset = nullptr);
std::string format_iso8601(double epoch, double offset);

/// `base_dir` resolves a `room` given as a relative path.
Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json scenario_to_json(const Scenario& scenario);
/// Parses and validates.
Scenario load_scenario_file(const std::filesystem::path& path);

}  // namespace uvc
