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

#include "uvc/room.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace uvc {

std::string_view to_string(LampTier tier) {
  switch (tier) {
    case LampTier::UpperRoom: return "upper_room";
    case LampTier::Ceiling: return "ceiling";
    case LampTier::Desk: return "desk";
  }
  return "unknown";
}

std::string_view to_string(SensorKind kind) {
  switch (kind) {
    case SensorKind::PIR: return "pir";
    case SensorKind::Ultrasonic: return "ultrasonic";
    case SensorKind::BleReceiver: return "ble_receiver";
    case SensorKind::ManualSwitch: return "manual_switch";
  }
  return "unknown";
}

std::optional<LampTier> parse_lamp_tier(std::string_view text) {
  for (auto t : {LampTier::UpperRoom, LampTier::Ceiling, LampTier::Desk}) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

std::optional<SensorKind> parse_sensor_kind(std::string_view text) {
  for (auto k : {SensorKind::PIR, SensorKind::Ultrasonic, SensorKind::BleReceiver,
                 SensorKind::ManualSwitch}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

const LampSpec* RoomModel::find_lamp(std::string_view id) const {
  auto it = std::find_if(lamps.begin(), lamps.end(),
                         [&](const LampSpec& l) { return l.id == id; });
  return it == lamps.end() ? nullptr : &*it;
}

const SensorSpec* RoomModel::find_sensor(std::string_view id) const {
  auto it = std::find_if(sensors.begin(), sensors.end(),
                         [&](const SensorSpec& s) { return s.id == id; });
  return it == sensors.end() ? nullptr : &*it;
}

const DeskZone* RoomModel::find_zone(std::string_view desk_id) const {
  auto it = std::find_if(desk_zones.begin(), desk_zones.end(),
                         [&](const DeskZone& z) { return z.desk_id == desk_id; });
  return it == desk_zones.end() ? nullptr : &*it;
}

namespace {

class ViolationSink {
 public:
  void add(std::string field, std::string message) {
    out_.push_back({std::move(field), std::move(message)});
  }

  void check_position(const RoomModel& m, const std::string& field, const Point3& p) {
    if (!p.is_finite()) {
      add(field, "non-finite coordinate");
    } else if (!m.contains(p)) {
      add(field, fmt::format("({}, {}, {}) lies outside the {} x {} x {} m room", p.x,
                             p.y, p.z, m.width, m.length, m.ceiling_height));
    }
  }

  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::vector<Violation> validate(const RoomModel& m) {
  ViolationSink sink;

  if (!positive_finite(m.width)) sink.add("room.width", "must be a positive length");
  if (!positive_finite(m.length)) sink.add("room.length", "must be a positive length");
  if (!positive_finite(m.ceiling_height))
    sink.add("room.ceiling_height", "must be a positive length");

  std::set<std::string> zone_ids;
  for (std::size_t i = 0; i < m.desk_zones.size(); ++i) {
    const auto& z = m.desk_zones[i];
    const auto path = fmt::format("desk_zones[{}]", i);
    if (z.desk_id.empty()) sink.add(path + ".desk_id", "must not be empty");
    if (!zone_ids.insert(z.desk_id).second)
      sink.add(path + ".desk_id", fmt::format("duplicate desk id '{}'", z.desk_id));
    if (!positive_finite(z.exclusion_radius))
      sink.add(path + ".exclusion_radius", "must be > 0");
    sink.check_position(m, path + ".center", z.center);
    for (std::size_t j = 0; j < m.desk_zones.size(); ++j) {
      if (j == i) continue;
      if (z.contains(m.desk_zones[j].center)) {
        sink.add(path + ".exclusion_radius",
                 fmt::format("zone '{}' contains the center of zone '{}'", z.desk_id,
                             m.desk_zones[j].desk_id));
      }
    }
  }

  std::set<std::string> lamp_ids;
  bool any_downward = false;
  for (std::size_t i = 0; i < m.lamps.size(); ++i) {
    const auto& l = m.lamps[i];
    const auto path = fmt::format("lamps[{}]", i);
    if (l.id.empty()) sink.add(path + ".id", "must not be empty");
    if (!lamp_ids.insert(l.id).second)
      sink.add(path + ".id", fmt::format("duplicate lamp id '{}'", l.id));
    sink.check_position(m, path + ".position", l.position);
    if (!positive_finite(l.electrical_power))
      sink.add(path + ".electrical_power", "must be > 0 W");
    if (!(l.uvc_efficiency > 0.0 && l.uvc_efficiency <= 1.0))
      sink.add(path + ".uvc_efficiency", "must lie in (0, 1]");
    if (!(l.beam_half_angle > 0.0 && l.beam_half_angle <= 90.0))
      sink.add(path + ".beam_half_angle", "must lie in (0, 90] degrees");
    const bool should_emit_down = l.tier != LampTier::UpperRoom;
    if (l.emits_downward != should_emit_down) {
      sink.add(path + ".emits_downward",
               should_emit_down ? "ceiling and desk lamps emit downward"
                                : "upper-room lamps must not emit downward");
    }
    if (l.emits_downward) any_downward = true;
    if (l.tier == LampTier::Desk) {
      const auto* zone = m.find_zone(l.desk_id);
      if (zone == nullptr) {
        sink.add(path + ".desk_id",
                 fmt::format("desk lamp refers to unknown desk '{}'", l.desk_id));
      } else if (!zone->has_desk_lamp) {
        sink.add(path + ".desk_id",
                 fmt::format("desk zone '{}' is not marked has_desk_lamp", l.desk_id));
      }
    }
  }

  std::set<std::string> sensor_ids;
  int manual = 0;
  int pir = 0;
  int us = 0;
  for (std::size_t i = 0; i < m.sensors.size(); ++i) {
    const auto& s = m.sensors[i];
    const auto path = fmt::format("sensors[{}]", i);
    if (s.id.empty()) sink.add(path + ".id", "must not be empty");
    if (!sensor_ids.insert(s.id).second)
      sink.add(path + ".id", fmt::format("duplicate sensor id '{}'", s.id));
    sink.check_position(m, path + ".position", s.position);
    if (!(s.hold_time >= 0.0)) sink.add(path + ".hold_time", "must be >= 0 s");
    if (!(s.max_range >= 0.0)) sink.add(path + ".max_range", "must be >= 0 m");
    if (s.kind == SensorKind::PIR || s.kind == SensorKind::Ultrasonic) {
      if (!s.aim.is_finite() || std::abs(s.aim.norm() - 1.0) > 1e-6)
        sink.add(path + ".aim", "must be a unit vector");
      if (!(s.fov_half_angle > 0.0 && s.fov_half_angle <= 180.0))
        sink.add(path + ".fov_half_angle", "must lie in (0, 180] degrees");
    }
    if (s.kind == SensorKind::Ultrasonic && !positive_finite(s.max_range))
      sink.add(path + ".max_range", "ultrasonic sensors need a positive range");
    if (!s.desk_id.empty() && m.find_zone(s.desk_id) == nullptr)
      sink.add(path + ".desk_id", fmt::format("unknown desk '{}'", s.desk_id));
    switch (s.kind) {
      case SensorKind::ManualSwitch: ++manual; break;
      case SensorKind::PIR: ++pir; break;
      case SensorKind::Ultrasonic: ++us; break;
      case SensorKind::BleReceiver: break;
    }
  }
  if (manual != 1)
    sink.add("sensors", fmt::format("expected exactly one manual_switch, found {}", manual));
  if (any_downward && (pir == 0 || us == 0))
    sink.add("sensors", "downward lamps require at least one pir and one ultrasonic sensor");

  sink.check_position(m, "door", m.door_position);
  return sink.take();
}

RoomModel paper_default_room() {
  RoomModel m;
  m.width = 4.3;
  m.length = 5.6;
  m.ceiling_height = 2.6;

  const double cx = m.width / 2.0;
  const DeskZone desk1{"desk-1", {cx, 0.6, 0.7}, 2.0, false};
  const DeskZone desk2{"desk-2", {cx, 5.0, 0.7}, 2.0, true};
  m.desk_zones = {desk1, desk2};

  m.lamps = {
      {"ceiling-1", LampTier::Ceiling, {cx, m.length / 3.0, m.ceiling_height}, 36.0, 0.33,
       true, 90.0, ""},
      {"ceiling-2", LampTier::Ceiling, {cx, 2.0 * m.length / 3.0, m.ceiling_height}, 36.0,
       0.33, true, 90.0, ""},
      {"desk-lamp-2", LampTier::Desk, {cx, desk2.center.y, 1.2}, 24.0, 0.33, true, 60.0,
       "desk-2"},
      {"upper-room", LampTier::UpperRoom, {0.05, m.length / 2.0, 2.4}, 25.0, 0.33, false,
       90.0, ""},
  };

  // Both PIRs sit in the corners at the Desk 2 end, looking at the floor center.
  const Point3 look_at{cx, m.length / 2.0, 0.0};
  const Point3 pir1{0.1, 5.5, 2.5};
  const Point3 pir2{4.2, 5.5, 2.5};
  m.sensors = {
      {"pir-1", SensorKind::PIR, pir1, (look_at - pir1).normalized(), 60.0, 0.0, 0.0, ""},
      {"pir-2", SensorKind::PIR, pir2, (look_at - pir2).normalized(), 60.0, 0.0, 0.0, ""},
      {"us-desk-2", SensorKind::Ultrasonic, {cx, 5.55, 1.1}, {0.0, -1.0, 0.0}, 30.0, 2.0,
       0.0, "desk-2"},
      {"ble-rx", SensorKind::BleReceiver, {cx, m.length / 2.0, 2.5}, {0.0, 0.0, -1.0},
       180.0, 0.0, 0.0, ""},
      {"manual-switch", SensorKind::ManualSwitch, {2.6, 0.05, 1.2}, {0.0, 1.0, 0.0}, 180.0,
       0.0, 0.0, ""},
  };

  m.door_position = {cx, 0.0, 0.0};
  return m;
}

}  // namespace uvc
