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

#include "uvc/timeline_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "csv.hpp"
#include "uvc/event_log.hpp"

namespace uvc {

namespace {

std::string zones_field(const OccupancySnapshot& s) {
  std::string out;
  for (const auto& [id, occ] : s.desk_zone_occupied) {
    if (!out.empty()) out += ';';
    out += id + '=' + (occ ? '1' : '0');
  }
  return out;
}

std::string sources_field(const OccupancySnapshot& s) {
  std::string out;
  for (const auto& src : s.contributing_sources) {
    if (!out.empty()) out += ';';
    out += src;
  }
  return out;
}

std::string event_value(const SensorEvent& e) {
  if (const auto* us = std::get_if<UsPresence>(&e.payload)) return fmt::format("{:.6f}", us->distance);
  if (const auto* ble = std::get_if<BleAdvert>(&e.payload)) return fmt::format("{:.6f}", ble->rssi);
  return {};
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

}  // namespace

void write_events_csv(std::ostream& out, const Timeline& tl) {
  write_event_log_header(out);
  for (const auto& r : tl.events) write_event_row(out, r.event);
}

void write_snapshots_csv(std::ostream& out, const Timeline& tl) {
  out << "timestamp_s,room_occupied,room_motion,approach_detected,manual_kill,"
         "desk_zones,last_motion_s,sources\n";
  for (const auto& s : tl.snapshots) {
    fmt::print(out, "{:.6f},{:d},{:d},{:d},{:d},{},{},{}\n", s.timestamp, s.room_occupied,
               s.room_motion, s.approach_detected, s.manual_kill, csv::quote(zones_field(s)),
               s.last_motion_time ? fmt::format("{:.6f}", *s.last_motion_time) : "",
               csv::quote(sources_field(s)));
  }
}

void write_probes_csv(std::ostream& out, const Timeline& tl) {
  out << "timestamp_s";
  for (const auto& p : tl.probes) out << ',' << csv::quote(p.name + "_w_m2");
  out << '\n';
  for (const auto& s : tl.probe_samples) {
    fmt::print(out, "{:.6f}", s.timestamp);
    for (double v : s.values) fmt::print(out, ",{:.9g}", v);
    out << '\n';
  }
}

void write_checkpoints_csv(std::ostream& out, const Timeline& tl) {
  out << "timestamp_s,min_dose_j_m2,max_dose_j_m2,mean_dose_j_m2\n";
  for (const auto& c : tl.checkpoints)
    fmt::print(out, "{:.6f},{:.9g},{:.9g},{:.9g}\n", c.timestamp, c.min_dose, c.max_dose,
               c.mean_dose);
}

void write_merged_timeline_csv(std::ostream& out, const Timeline& tl) {
  out << "timestamp_s,record,subject,value,detail\n";
  std::size_t ei = 0, si = 0, ci = 0;
  constexpr double inf = std::numeric_limits<double>::infinity();
  while (ei < tl.events.size() || si < tl.snapshots.size() || ci < tl.commands.size()) {
    const double te = ei < tl.events.size() ? tl.events[ei].event.timestamp : inf;
    const double ts = si < tl.snapshots.size() ? tl.snapshots[si].timestamp : inf;
    const double tc = ci < tl.commands.size() ? tl.commands[ci].timestamp : inf;
    if (te <= ts && te <= tc) {
      const auto& r = tl.events[ei++];
      fmt::print(out, "{:.6f},event,{},{},{}:{}\n", te, csv::quote(r.event.source),
                 event_value(r.event), event_kind(r.event.payload), to_string(r.origin));
    } else if (ts <= tc) {
      const auto& s = tl.snapshots[si++];
      fmt::print(out, "{:.6f},snapshot,room,{:d},{}\n", ts, s.room_occupied || s.approach_detected,
                 csv::quote(fmt::format("motion={:d};approach={:d};kill={:d};{}", s.room_motion,
                                        s.approach_detected, s.manual_kill, zones_field(s))));
    } else {
      const auto& c = tl.commands[ci++];
      fmt::print(out, "{:.6f},command,{},{},{}\n", tc, csv::quote(c.lamp_id),
                 to_string(c.action), to_string(c.reason));
    }
  }
}

nlohmann::json safety_report_json(const SafetyReport& r, const Scenario& scenario) {
  nlohmann::json j;
  j["scenario"] = scenario.name;
  j["seed"] = scenario.seed;
  j["verdict"] = r.pass() ? "pass" : "fail";
  j["reaction_deadline_s"] = r.reaction_deadline;
  j["violating_ticks"] = r.violating_ticks;
  auto& v = j["violations"] = nlohmann::json::array();
  for (const auto& x : r.violations)
    v.push_back({{"timestamp_s", x.timestamp},
                 {"occupant_id", x.occupant_id},
                 {"lamp_id", x.lamp_id},
                 {"received_irradiance_w_m2", x.received_irradiance},
                 {"latency_s", x.latency}});
  auto& d = j["occupant_dose_j_m2"] = nlohmann::json::object();
  for (const auto& [id, dose] : r.occupant_dose) d[id] = dose;
  auto& e = j["exposures"] = nlohmann::json::array();
  for (const auto& x : r.exposures) {
    nlohmann::json row{{"occupant_id", x.occupant_id},
                       {"lamp_id", x.lamp_id},
                       {"last_exposed_tick_s", x.last_exposed_tick},
                       {"ended_by_lamp_off", x.ended_by_lamp_off}};
    // Occupants present from the first tick have no entry time.
    row["entry_time_s"] = std::isfinite(x.entry_time) ? nlohmann::json(x.entry_time) : nlohmann::json(nullptr);
    row["first_inside_tick_s"] =
        std::isfinite(x.first_inside_tick) ? nlohmann::json(x.first_inside_tick) : nlohmann::json(nullptr);
    e.push_back(std::move(row));
  }
  return j;
}

std::vector<std::string> write_run_artifacts(const std::filesystem::path& dir,
                                             const SimulationResult& result,
                                             const Scenario& scenario) {
  std::filesystem::create_directories(dir);
  const auto& tl = result.timeline;
  std::vector<std::string> files;
  auto emit = [&](const std::string& name, auto&& writer) {
    auto f = open_out(dir / name);
    writer(f);
    if (!f) throw std::runtime_error("write failed: " + (dir / name).string());
    files.push_back(name);
  };
  emit("events.csv", [&](std::ostream& o) { write_events_csv(o, tl); });
  emit("snapshots.csv", [&](std::ostream& o) { write_snapshots_csv(o, tl); });
  emit("commands.csv", [&](std::ostream& o) { write_command_log(o, tl.commands); });
  emit("probes.csv", [&](std::ostream& o) { write_probes_csv(o, tl); });
  emit("checkpoints.csv", [&](std::ostream& o) { write_checkpoints_csv(o, tl); });
  emit("timeline.csv", [&](std::ostream& o) { write_merged_timeline_csv(o, tl); });
  emit("safety_report.json",
       [&](std::ostream& o) { o << safety_report_json(result.safety, scenario).dump(2) << '\n'; });
  emit("dose_grid.csv", [&](std::ostream& o) {
    o << "row,col,x_m,y_m,dose_j_m2\n";
    const auto& g = result.dose;
    for (int r = 0; r < g.rows; ++r)
      for (int c = 0; c < g.cols; ++c) {
        const auto i = g.index(r, c);
        fmt::print(o, "{},{},{:.6f},{:.6f},{:.9g}\n", r, c, g.cell_centers[i].x,
                   g.cell_centers[i].y, g.accumulated_dose[i]);
      }
  });
  return files;
}

}  // namespace uvc
