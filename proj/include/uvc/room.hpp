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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uvc/geometry.hpp"

namespace uvc {

enum class LampTier { UpperRoom, Ceiling, Desk };
enum class SensorKind { PIR, Ultrasonic, BleReceiver, ManualSwitch };

std::string_view to_string(LampTier tier);
std::string_view to_string(SensorKind kind);
std::optional<LampTier> parse_lamp_tier(std::string_view text);
std::optional<SensorKind> parse_sensor_kind(std::string_view text);

/// A UVC luminaire. Radiant output at 253.7 nm is electrical power scaled by
/// `uvc_efficiency`; `beam_half_angle` (degrees from nadir) models fixture
/// shielding, 90 meaning an unshielded downward hemisphere.
struct LampSpec {
  std::string id;
  LampTier tier = LampTier::Ceiling;
  Point3 position;
  double electrical_power = 0.0;  // W
  double uvc_efficiency = 0.33;
  bool emits_downward = true;
  double beam_half_angle = 90.0;  // deg
  std::string desk_id;            // Desk tier only

  double uvc_power() const { return electrical_power * uvc_efficiency; }

  friend bool operator==(const LampSpec&, const LampSpec&) = default;
};

struct SensorSpec {
  std::string id;
  SensorKind kind = SensorKind::PIR;
  Point3 position;
  Point3 aim{0.0, 0.0, -1.0};
  double fov_half_angle = 60.0;  // deg
  double max_range = 0.0;        // m, 0 = unbounded
  double hold_time = 0.0;        // s
  std::string desk_id;           // desk zone this sensor guards, if any

  friend bool operator==(const SensorSpec&, const SensorSpec&) = default;
};

struct DeskZone {
  std::string desk_id;
  Point3 center;
  double exclusion_radius = 2.0;  // m, measured horizontally
  bool has_desk_lamp = false;

  /// Horizontal containment; the zone is a vertical cylinder.
  bool contains(const Point3& p) const {
    return horizontal_distance(p, center) <= exclusion_radius;
  }

  friend bool operator==(const DeskZone&, const DeskZone&) = default;
};

struct RoomModel {
  double width = 0.0;
  double length = 0.0;
  double ceiling_height = 0.0;
  std::vector<LampSpec> lamps;
  std::vector<SensorSpec> sensors;
  std::vector<DeskZone> desk_zones;
  Point3 door_position;

  bool contains(const Point3& p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= length &&
           p.z >= 0.0 && p.z <= ceiling_height;
  }

  /// Floor-plan containment, ignoring height.
  bool contains_plan(const Point3& p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= length;
  }

  Point3 center(double z) const { return {width / 2.0, length / 2.0, z}; }

  const LampSpec* find_lamp(std::string_view id) const;
  const SensorSpec* find_sensor(std::string_view id) const;
  const DeskZone* find_zone(std::string_view desk_id) const;

  friend bool operator==(const RoomModel&, const RoomModel&) = default;
};

/// One failed invariant. `field` is a path such as "lamps[2].position".
struct Violation {
  std::string field;
  std::string message;
};

std::vector<Violation> validate(const RoomModel& model);

/// The BEARS testbed: 4.3 x 5.6 x 2.6 m, two 36 W ceiling battens, a 24 W
/// desk lamp over Desk 2, a 25 W upper-room fixture at 2.4 m, two corner PIR
/// sensors, one ultrasonic sensor guarding Desk 2, a BLE receiver and a
/// manual switch.
RoomModel paper_default_room();

}  // namespace uvc
