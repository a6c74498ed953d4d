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

#include "uvc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json_reader.hpp"

namespace uvc {

using nlohmann::json;
using detail::ObjectReader;
using detail::point_json;

ConfigError::ConfigError(std::string field, const std::string& message, std::size_t line)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}: {}", line, field, message)
                                  : fmt::format("{}: {}", field, message)),
      field_(std::move(field)),
      line_(line) {}

namespace {
std::string join_violations(const std::vector<Violation>& v) {
  std::string out = fmt::format("{} validation violation(s)", v.size());
  for (const auto& x : v) out += fmt::format("\n  {}: {}", x.field, x.message);
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

void require_valid(std::vector<Violation> violations) {
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(
                              std::count(text.begin(), text.begin() + upto, '\n'));
    throw ConfigError("<document>", e.what(), line);
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

double default_fov(SensorKind kind) {
  switch (kind) {
    case SensorKind::PIR: return 60.0;
    case SensorKind::Ultrasonic: return 30.0;
    default: return 180.0;
  }
}

Point3 unit_or_raw(const Point3& aim) {
  // Leave near-unit vectors alone so save/load round-trips bit-exactly.
  const double n = aim.norm();
  if (n == 0.0 || std::abs(n - 1.0) < 1e-12) return aim;
  return aim.normalized();
}

}  // namespace

RoomModel room_from_json(const json& j) {
  ObjectReader top(j, "");
  RoomModel m;
  {
    ObjectReader r(top.raw("room"), "room");
    m.width = r.number("width");
    m.length = r.number("length");
    m.ceiling_height = r.number("ceiling_height");
    r.finish();
  }

  const auto& lamps = top.array("lamps");
  for (std::size_t i = 0; i < lamps.size(); ++i) {
    ObjectReader r(lamps[i], fmt::format("lamps[{}]", i));
    LampSpec l;
    l.id = r.string("id");
    const auto tier_text = r.string("tier");
    const auto tier = parse_lamp_tier(tier_text);
    if (!tier) throw ConfigError(r.child_path("tier"), fmt::format("unknown tier '{}'", tier_text));
    l.tier = *tier;
    l.position = r.point("position");
    l.electrical_power = r.number("electrical_power_w");
    l.uvc_efficiency = r.number_or("uvc_efficiency", 0.33);
    l.emits_downward = r.boolean_or("emits_downward", l.tier != LampTier::UpperRoom);
    l.beam_half_angle = r.number_or("beam_half_angle_deg", 90.0);
    l.desk_id = r.string_or("desk_id", "");
    r.finish();
    m.lamps.push_back(std::move(l));
  }

  const auto& sensors = top.array("sensors");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    ObjectReader r(sensors[i], fmt::format("sensors[{}]", i));
    SensorSpec s;
    s.id = r.string("id");
    const auto kind_text = r.string("kind");
    const auto kind = parse_sensor_kind(kind_text);
    if (!kind) throw ConfigError(r.child_path("kind"), fmt::format("unknown kind '{}'", kind_text));
    s.kind = *kind;
    s.position = r.point("position");
    s.aim = r.has("aim") ? unit_or_raw(r.point("aim")) : Point3{0.0, 0.0, -1.0};
    s.fov_half_angle = r.number_or("fov_half_angle_deg", default_fov(s.kind));
    s.max_range = r.number_or("max_range_m", s.kind == SensorKind::Ultrasonic ? 2.0 : 0.0);
    s.hold_time = r.number_or("hold_time_s", 0.0);
    s.desk_id = r.string_or("desk_id", "");
    r.finish();
    m.sensors.push_back(std::move(s));
  }

  const auto& zones = top.array("desk_zones");
  for (std::size_t i = 0; i < zones.size(); ++i) {
    ObjectReader r(zones[i], fmt::format("desk_zones[{}]", i));
    DeskZone z;
    z.desk_id = r.string("desk_id");
    z.center = r.point("center");
    z.exclusion_radius = r.number_or("exclusion_radius_m", 2.0);
    z.has_desk_lamp = r.boolean_or("has_desk_lamp", false);
    r.finish();
    m.desk_zones.push_back(std::move(z));
  }

  m.door_position = top.point("door");
  top.finish();
  return m;
}

json room_to_json(const RoomModel& m) {
  json j;
  j["room"] = {{"width", m.width}, {"length", m.length}, {"ceiling_height", m.ceiling_height}};
  j["lamps"] = json::array();
  for (const auto& l : m.lamps) {
    json o = {{"id", l.id},
              {"tier", to_string(l.tier)},
              {"position", point_json(l.position)},
              {"electrical_power_w", l.electrical_power},
              {"uvc_efficiency", l.uvc_efficiency},
              {"emits_downward", l.emits_downward},
              {"beam_half_angle_deg", l.beam_half_angle}};
    if (!l.desk_id.empty()) o["desk_id"] = l.desk_id;
    j["lamps"].push_back(std::move(o));
  }
  j["sensors"] = json::array();
  for (const auto& s : m.sensors) {
    json o = {{"id", s.id},
              {"kind", to_string(s.kind)},
              {"position", point_json(s.position)},
              {"aim", point_json(s.aim)},
              {"fov_half_angle_deg", s.fov_half_angle},
              {"max_range_m", s.max_range},
              {"hold_time_s", s.hold_time}};
    if (!s.desk_id.empty()) o["desk_id"] = s.desk_id;
    j["sensors"].push_back(std::move(o));
  }
  j["desk_zones"] = json::array();
  for (const auto& z : m.desk_zones) {
    j["desk_zones"].push_back({{"desk_id", z.desk_id},
                               {"center", point_json(z.center)},
                               {"exclusion_radius_m", z.exclusion_radius},
                               {"has_desk_lamp", z.has_desk_lamp}});
  }
  j["door"] = point_json(m.door_position);
  return j;
}

RoomModel load_room(std::string_view config_text) {
  auto m = room_from_json(parse_json_text(config_text));
  require_valid(validate(m));
  return m;
}

RoomModel load_room_file(const std::filesystem::path& path) {
  return load_room(read_text_file(path));
}

std::string save_room(const RoomModel& room) { return room_to_json(room).dump(2) + "\n"; }

CyclePolicy policy_from_json(const json& j) {
  ObjectReader r(j, "policy");
  CyclePolicy p;
  p.ceiling_cycle = r.number_or("ceiling_cycle_s", p.ceiling_cycle);
  p.desk_cycle = r.number_or("desk_cycle_s", p.desk_cycle);
  p.upper_room_cycle = r.number_or("upper_room_cycle_s", p.upper_room_cycle);
  p.upper_room_period = r.number_or("upper_room_period_s", p.upper_room_period);
  p.vacancy_grace = r.number_or("vacancy_grace_s", p.vacancy_grace);
  p.desk_quiet_gap = r.number_or("desk_quiet_gap_s", p.desk_quiet_gap);
  p.reaction_deadline = r.number_or("reaction_deadline_s", p.reaction_deadline);
  p.tz_offset = r.number_or("tz_offset_s", p.tz_offset);
  p.test_only_bypass_interlock = r.boolean_or("test_only_bypass_interlock", false);
  r.finish();
  return p;
}

json policy_to_json(const CyclePolicy& p) {
  json j = {{"ceiling_cycle_s", p.ceiling_cycle},
            {"desk_cycle_s", p.desk_cycle},
            {"upper_room_cycle_s", p.upper_room_cycle},
            {"upper_room_period_s", p.upper_room_period},
            {"vacancy_grace_s", p.vacancy_grace},
            {"desk_quiet_gap_s", p.desk_quiet_gap},
            {"reaction_deadline_s", p.reaction_deadline},
            {"tz_offset_s", p.tz_offset}};
  if (p.test_only_bypass_interlock) j["test_only_bypass_interlock"] = true;
  return j;
}

CyclePolicy load_policy_file(const std::filesystem::path& path) {
  auto p = policy_from_json(parse_json_text(read_text_file(path)));
  require_valid(validate(p));
  return p;
}

FusionParams fusion_from_json(const json& j) {
  ObjectReader r(j, "fusion");
  FusionParams p;
  p.pir_hold = r.number_or("pir_hold_s", p.pir_hold);
  p.us_hold = r.number_or("us_hold_s", p.us_hold);
  p.ble_ref_rssi_1m = r.number_or("ble_ref_rssi_1m_dbm", p.ble_ref_rssi_1m);
  p.ble_path_loss_exponent = r.number_or("ble_path_loss_exponent", p.ble_path_loss_exponent);
  p.approach_radius = r.number_or("approach_radius_m", p.approach_radius);
  p.ble_stale_after = r.number_or("ble_stale_after_s", p.ble_stale_after);
  r.finish();
  return p;
}

json fusion_to_json(const FusionParams& p) {
  return {{"pir_hold_s", p.pir_hold},
          {"us_hold_s", p.us_hold},
          {"ble_ref_rssi_1m_dbm", p.ble_ref_rssi_1m},
          {"ble_path_loss_exponent", p.ble_path_loss_exponent},
          {"approach_radius_m", p.approach_radius},
          {"ble_stale_after_s", p.ble_stale_after}};
}

}  // namespace uvc
