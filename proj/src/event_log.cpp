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

#include "uvc/event_log.hpp"

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "csv.hpp"

namespace uvc {

EventLogError::EventLogError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("event log line {}: {}", line, what)), line_(line) {}

std::string_view event_kind(const SensorPayload& payload) {
  return std::visit(
      [](const auto& p) -> std::string_view {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PirMotion>) return "PIR";
        else if constexpr (std::is_same_v<T, UsPresence>) return "US";
        else if constexpr (std::is_same_v<T, BleAdvert>) return "BLE";
        else if constexpr (std::is_same_v<T, ManualOff>) return "MANUAL_OFF";
        else if constexpr (std::is_same_v<T, ManualRearm>) return "MANUAL_REARM";
        else return "GARBLED";
      },
      payload);
}

ParsedEventLog read_event_log(std::istream& in) {
  ParsedEventLog out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = csv::split(line);
    if (!header_seen) {
      header_seen = true;
      if (!cols.empty() && cols[0] == "timestamp_s") continue;
    }
    if (cols.size() < 3) throw EventLogError(line_no, "expected at least 3 columns");
    cols.resize(5);

    const auto ts = csv::parse_double(cols[0]);
    if (!ts) throw EventLogError(line_no, fmt::format("bad timestamp '{}'", cols[0]));
    if (cols[1].empty()) throw EventLogError(line_no, "empty source");

    SensorEvent e;
    e.timestamp = *ts;
    e.source = cols[1];
    const auto& kind = cols[2];
    auto garbled = [&](std::string why) {
      out.warnings.push_back({line_no, std::move(why)});
      e.payload = GarbledPayload{line};
    };
    if (kind == "PIR") {
      e.payload = PirMotion{};
    } else if (kind == "US") {
      if (auto d = csv::parse_double(cols[3])) e.payload = UsPresence{*d};
      else garbled(fmt::format("bad ultrasonic distance '{}'", cols[3]));
    } else if (kind == "BLE") {
      auto rssi = csv::parse_double(cols[4]);
      if (rssi && !cols[3].empty()) e.payload = BleAdvert{cols[3], *rssi};
      else garbled("BLE row needs beacon_id and rssi_dbm");
    } else if (kind == "MANUAL_OFF") {
      e.payload = ManualOff{};
    } else if (kind == "MANUAL_REARM") {
      e.payload = ManualRearm{};
    } else {
      garbled(fmt::format("unknown kind '{}'", kind));
    }
    out.events.push_back(std::move(e));
  }
  return out;
}

void write_event_log_header(std::ostream& out) { out << "timestamp_s,source,kind,arg1,arg2\n"; }

void write_event_row(std::ostream& out, const SensorEvent& e) {
  std::string arg1;
  std::string arg2;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UsPresence>) {
          arg1 = fmt::format("{:.6f}", p.distance);
        } else if constexpr (std::is_same_v<T, BleAdvert>) {
          arg1 = csv::quote(p.beacon_id);
          arg2 = fmt::format("{:.6f}", p.rssi);
        } else if constexpr (std::is_same_v<T, GarbledPayload>) {
          arg1 = csv::quote(p.raw);
        }
      },
      e.payload);
  fmt::print(out, "{:.6f},{},{},{},{}\n", e.timestamp, csv::quote(e.source),
             event_kind(e.payload), arg1, arg2);
}

void write_event_log(std::ostream& out, const std::vector<SensorEvent>& events) {
  write_event_log_header(out);
  for (const auto& e : events) write_event_row(out, e);
}

}  // namespace uvc
