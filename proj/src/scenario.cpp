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

#include "uvc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <fmt/format.h>

#include "json_reader.hpp"
#include "uvc/config.hpp"
#include "uvc/event_log.hpp"

namespace uvc {

using nlohmann::json;
using detail::ObjectReader;
using detail::point_json;

namespace {

// Segment index i such that waypoints[i].time <= t < waypoints[i+1].time.
std::size_t segment_for(const std::vector<Waypoint>& w, double t) {
  auto it = std::upper_bound(w.begin(), w.end(), t,
                             [](double v, const Waypoint& p) { return v < p.time; });
  return static_cast<std::size_t>(std::distance(w.begin(), it)) - 1;
}

}  // namespace

Point3 OccupantScript::position_at(double t) const {
  if (waypoints.empty()) return {};
  if (t <= waypoints.front().time) return waypoints.front().position;
  if (t >= waypoints.back().time) return waypoints.back().position;
  const auto i = segment_for(waypoints, t);
  const auto& a = waypoints[i];
  const auto& b = waypoints[i + 1];
  return lerp(a.position, b.position, (t - a.time) / (b.time - a.time));
}

bool OccupantScript::inside_at(double t, const RoomModel& room) const {
  if (waypoints.empty()) return false;
  if (t <= waypoints.front().time) return waypoints.front().inside_room;
  if (t >= waypoints.back().time) return waypoints.back().inside_room;
  const auto i = segment_for(waypoints, t);
  const auto& a = waypoints[i];
  const auto& b = waypoints[i + 1];
  if (a.inside_room == b.inside_room) return a.inside_room;
  return room.contains_plan(position_at(t));
}

std::vector<Violation> validate(const Scenario& s) {
  std::vector<Violation> out;
  auto prefixed = [&](const std::string& prefix, std::vector<Violation> v) {
    for (auto& x : v) {
      x.field = x.field.rfind(prefix, 0) == 0 ? x.field : prefix + x.field;
      out.push_back(std::move(x));
    }
  };
  prefixed("room.", validate(s.room));
  prefixed("", validate(s.policy));
  prefixed("", validate(s.fusion));

  if (!(std::isfinite(s.duration) && s.duration > 0.0))
    out.push_back({"duration_s", "must be > 0"});
  if (!(s.tick > 0.0 && s.tick <= 1.0)) out.push_back({"tick_s", "must lie in (0, 1]"});
  if (!std::isfinite(s.start_epoch)) out.push_back({"start_iso8601", "must be finite"});
  if (!(s.checkpoint_interval > 0.0))
    out.push_back({"checkpoint_interval_s", "must be > 0"});

  std::set<std::string> ids;
  for (std::size_t i = 0; i < s.occupants.size(); ++i) {
    const auto& o = s.occupants[i];
    const auto path = fmt::format("occupants[{}]", i);
    if (o.occupant_id.empty()) out.push_back({path + ".id", "must not be empty"});
    if (!ids.insert(o.occupant_id).second)
      out.push_back({path + ".id", fmt::format("duplicate occupant '{}'", o.occupant_id)});
    if (o.waypoints.empty()) out.push_back({path + ".waypoints", "needs at least one waypoint"});
    for (std::size_t k = 0; k < o.waypoints.size(); ++k) {
      const auto& w = o.waypoints[k];
      const auto wpath = fmt::format("{}.waypoints[{}]", path, k);
      if (!std::isfinite(w.time) || !w.position.is_finite()) {
        out.push_back({wpath, "non-finite time or position"});
        continue;
      }
      if (k > 0 && !(w.time > o.waypoints[k - 1].time))
        out.push_back({wpath + ".t", "waypoint times must be strictly increasing"});
      if (w.inside_room && !s.room.contains(w.position))
        out.push_back({wpath + ".position", "inside waypoint lies outside the room"});
      if (!w.inside_room && s.room.contains_plan(w.position))
        out.push_back({wpath + ".position", "outside waypoint lies within the floor plan"});
      if (k > 0 && !w.inside_room && !o.waypoints[k - 1].inside_room) {
        const auto& a = o.waypoints[k - 1].position;
        for (int j = 1; j < 32; ++j) {
          if (s.room.contains_plan(lerp(a, w.position, j / 32.0))) {
            out.push_back({wpath, "outside segment passes through the room"});
            break;
          }
        }
      }
    }
  }

  if (!(s.noise.rssi_sigma_db >= 0.0)) out.push_back({"noise.rssi_sigma_db", "must be >= 0"});
  if (!(s.noise.pir_miss_probability >= 0.0 && s.noise.pir_miss_probability <= 1.0))
    out.push_back({"noise.pir_miss_probability", "must lie in [0, 1]"});
  if (!(s.noise.false_positive_rate_per_hour >= 0.0))
    out.push_back({"noise.false_positive_rate_per_hour", "must be >= 0"});
  if (!(s.models.pir_speed_threshold >= 0.0))
    out.push_back({"models.pir_speed_threshold_m_s", "must be >= 0"});
  if (!(s.models.ble_advert_period > 0.0))
    out.push_back({"models.ble_advert_period_s", "must be > 0"});
  for (auto [name, h] : {std::pair{"models.chest_height_m", s.models.chest_height},
                         std::pair{"models.probe_height_m", s.models.probe_height}}) {
    if (!(h > 0.0 && h < s.room.ceiling_height)) out.push_back({name, "must lie inside the room"});
  }

  for (std::size_t i = 0; i < s.injected_events.size(); ++i) {
    const auto t = s.injected_events[i].timestamp;
    if (!(t >= 0.0 && t <= s.duration))
      out.push_back({fmt::format("injected_events[{}].t", i), "must lie within the run"});
  }
  return out;
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

}  // namespace

double parse_iso8601(std::string_view text, double* offset) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double sec = 0.0;
  int consumed = 0;
  const std::string s(text);
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%lf%n", &y, &mo, &d, &h, &mi, &sec,
                  &consumed) != 6) {
    throw ConfigError("start_iso8601", fmt::format("cannot parse timestamp '{}'", text));
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec < 0.0 || sec >= 61.0)
    throw ConfigError("start_iso8601", fmt::format("timestamp '{}' out of range", text));
  const std::string_view zone = text.substr(static_cast<std::size_t>(consumed));
  double off = 0.0;
  if (zone == "Z" || zone.empty()) {
    off = 0.0;
  } else {
    int zh = 0, zm = 0;
    char sign = 0;
    const std::string z(zone);
    if (std::sscanf(z.c_str(), "%c%2d:%2d", &sign, &zh, &zm) != 3 || (sign != '+' && sign != '-'))
      throw ConfigError("start_iso8601", fmt::format("bad zone designator '{}'", zone));
    off = (sign == '-' ? -1.0 : 1.0) * (zh * 3600.0 + zm * 60.0);
  }
  if (offset != nullptr) *offset = off;
  const auto days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + sec - off;
}

std::string format_iso8601(double epoch, double offset) {
  const double local = epoch + offset;
  const auto days = static_cast<std::int64_t>(std::floor(local / 86400.0));
  const double rem = local - static_cast<double>(days) * 86400.0;
  std::int64_t y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days, y, m, d);
  const int h = static_cast<int>(rem / 3600.0);
  const int mi = static_cast<int>((rem - h * 3600.0) / 60.0);
  const double sec = rem - h * 3600.0 - mi * 60.0;
  const auto off_min = static_cast<int>(std::lround(std::abs(offset) / 60.0));
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}{}{:02}:{:02}", y, m, d, h, mi,
                     static_cast<int>(sec), offset < 0 ? '-' : '+', off_min / 60, off_min % 60);
}

namespace {

SensorEvent injected_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SensorEvent e;
  e.timestamp = r.number("t");
  e.source = r.string("source");
  const auto kind = r.string("kind");
  if (kind == "PIR") {
    e.payload = PirMotion{};
  } else if (kind == "US") {
    e.payload = UsPresence{r.number("distance_m")};
  } else if (kind == "BLE") {
    e.payload = BleAdvert{r.string("beacon_id"), r.number("rssi_dbm")};
  } else if (kind == "MANUAL_OFF") {
    e.payload = ManualOff{};
  } else if (kind == "MANUAL_REARM") {
    e.payload = ManualRearm{};
  } else {
    throw ConfigError(r.child_path("kind"), fmt::format("unknown event kind '{}'", kind));
  }
  r.finish();
  return e;
}

json injected_to_json(const SensorEvent& e) {
  json j = {{"t", e.timestamp}, {"source", e.source}, {"kind", event_kind(e.payload)}};
  if (const auto* us = std::get_if<UsPresence>(&e.payload)) j["distance_m"] = us->distance;
  if (const auto* ble = std::get_if<BleAdvert>(&e.payload)) {
    j["beacon_id"] = ble->beacon_id;
    j["rssi_dbm"] = ble->rssi;
  }
  return j;
}

}  // namespace

Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  ObjectReader r(j, "");
  Scenario s;
  s.name = r.string_or("name", "");

  const auto& room = r.raw("room");
  if (room.is_string()) {
    std::filesystem::path p = room.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    s.room = room_from_json(parse_json_text(read_text_file(p)));
  } else {
    s.room = room_from_json(room);
  }

  double zone_offset = 0.0;
  s.start_epoch = parse_iso8601(r.string("start_iso8601"), &zone_offset);
  s.policy.tz_offset = zone_offset;
  if (r.has("policy")) {
    const auto& pj = r.raw("policy");
    s.policy = policy_from_json(pj);
    if (!pj.contains("tz_offset_s")) s.policy.tz_offset = zone_offset;
  }
  if (r.has("fusion")) s.fusion = fusion_from_json(r.raw("fusion"));

  s.duration = r.number("duration_s");
  s.tick = r.number_or("tick_s", s.tick);
  s.seed = r.unsigned_or("seed", s.seed);
  s.checkpoint_interval = r.number_or("checkpoint_interval_s", s.checkpoint_interval);

  if (r.has("noise")) {
    ObjectReader n(r.raw("noise"), "noise");
    s.noise.rssi_sigma_db = n.number_or("rssi_sigma_db", 0.0);
    s.noise.pir_miss_probability = n.number_or("pir_miss_probability", 0.0);
    s.noise.false_positive_rate_per_hour = n.number_or("false_positive_rate_per_hour", 0.0);
    n.finish();
  }
  if (r.has("models")) {
    ObjectReader m(r.raw("models"), "models");
    s.models.pir_speed_threshold = m.number_or("pir_speed_threshold_m_s", s.models.pir_speed_threshold);
    s.models.ble_advert_period = m.number_or("ble_advert_period_s", s.models.ble_advert_period);
    s.models.chest_height = m.number_or("chest_height_m", s.models.chest_height);
    s.models.probe_height = m.number_or("probe_height_m", s.models.probe_height);
    m.finish();
  }

  if (r.has("occupants")) {
    const auto& occ = r.array("occupants");
    for (std::size_t i = 0; i < occ.size(); ++i) {
      const auto path = fmt::format("occupants[{}]", i);
      ObjectReader o(occ[i], path);
      OccupantScript script;
      script.occupant_id = o.string("id");
      script.carries_beacon = o.boolean_or("carries_beacon", false);
      const auto& wps = o.array("waypoints");
      for (std::size_t k = 0; k < wps.size(); ++k) {
        ObjectReader w(wps[k], fmt::format("{}.waypoints[{}]", path, k));
        Waypoint wp;
        wp.time = w.number("t");
        wp.position = w.point("position");
        wp.inside_room = w.boolean_or("inside", true);
        w.finish();
        script.waypoints.push_back(wp);
      }
      o.finish();
      s.occupants.push_back(std::move(script));
    }
  }

  if (r.has("injected_events")) {
    const auto& ev = r.array("injected_events");
    for (std::size_t i = 0; i < ev.size(); ++i)
      s.injected_events.push_back(injected_from_json(ev[i], fmt::format("injected_events[{}]", i)));
  }
  r.finish();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  if (!s.name.empty()) j["name"] = s.name;
  j["room"] = room_to_json(s.room);
  j["policy"] = policy_to_json(s.policy);
  j["fusion"] = fusion_to_json(s.fusion);
  j["start_iso8601"] = format_iso8601(s.start_epoch, s.policy.tz_offset);
  j["duration_s"] = s.duration;
  j["tick_s"] = s.tick;
  j["seed"] = s.seed;
  j["checkpoint_interval_s"] = s.checkpoint_interval;
  j["noise"] = {{"rssi_sigma_db", s.noise.rssi_sigma_db},
                {"pir_miss_probability", s.noise.pir_miss_probability},
                {"false_positive_rate_per_hour", s.noise.false_positive_rate_per_hour}};
  j["models"] = {{"pir_speed_threshold_m_s", s.models.pir_speed_threshold},
                 {"ble_advert_period_s", s.models.ble_advert_period},
                 {"chest_height_m", s.models.chest_height},
                 {"probe_height_m", s.models.probe_height}};
  j["occupants"] = json::array();
  for (const auto& o : s.occupants) {
    json wps = json::array();
    for (const auto& w : o.waypoints)
      wps.push_back({{"t", w.time}, {"position", point_json(w.position)}, {"inside", w.inside_room}});
    j["occupants"].push_back(
        {{"id", o.occupant_id}, {"carries_beacon", o.carries_beacon}, {"waypoints", std::move(wps)}});
  }
  if (!s.injected_events.empty()) {
    j["injected_events"] = json::array();
    for (const auto& e : s.injected_events) j["injected_events"].push_back(injected_to_json(e));
  }
  return j;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  auto s = scenario_from_json(parse_json_text(read_text_file(path)), path.parent_path());
  require_valid(validate(s));
  return s;
}

}  // namespace uvc
