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

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "uvc/room.hpp"

namespace uvc {

struct PirMotion {
  friend bool operator==(const PirMotion&, const PirMotion&) = default;
};
struct UsPresence {
  double distance = 0.0;  // m
  friend bool operator==(const UsPresence&, const UsPresence&) = default;
};
struct BleAdvert {
  std::string beacon_id;
  double rssi = 0.0;  // dBm
  friend bool operator==(const BleAdvert&, const BleAdvert&) = default;
};
struct ManualOff {
  friend bool operator==(const ManualOff&, const ManualOff&) = default;
};
struct ManualRearm {
  friend bool operator==(const ManualRearm&, const ManualRearm&) = default;
};
/// A payload that could not be decoded. Fusion treats it as a detection.
struct GarbledPayload {
  std::string raw;
  friend bool operator==(const GarbledPayload&, const GarbledPayload&) = default;
};

using SensorPayload =
    std::variant<PirMotion, UsPresence, BleAdvert, ManualOff, ManualRearm, GarbledPayload>;

inline constexpr double kMinRssi = -120.0;
inline constexpr double kMaxRssi = 0.0;

struct SensorEvent {
  double timestamp = 0.0;  // s
  std::string source;
  SensorPayload payload;

  friend bool operator==(const SensorEvent&, const SensorEvent&) = default;
};

/// Total order used to serialize multi-source streams: timestamp, then source.
bool event_order(const SensorEvent& a, const SensorEvent& b);

struct FusionParams {
  double pir_hold = 15.0;                // s
  double us_hold = 10.0;                 // s
  double ble_ref_rssi_1m = -59.0;        // dBm
  double ble_path_loss_exponent = 2.0;
  double approach_radius = 5.0;          // m
  double ble_stale_after = 10.0;         // s

  friend bool operator==(const FusionParams&, const FusionParams&) = default;
};

std::vector<Violation> validate(const FusionParams& params);

/// Log-distance path-loss inversion: 10^((ref - rssi) / (10 n)).
double rssi_to_distance(double rssi, const FusionParams& params);

struct OccupancySnapshot {
  double timestamp = 0.0;
  bool room_occupied = false;
  /// PIR-class detection somewhere in the room (also set by garbled input).
  bool room_motion = false;
  std::map<std::string, bool> desk_zone_occupied;
  bool approach_detected = false;
  bool manual_kill = false;
  std::optional<double> last_motion_time;
  std::vector<std::string> contributing_sources;

  bool zone_occupied(const std::string& desk_id) const {
    auto it = desk_zone_occupied.find(desk_id);
    return it != desk_zone_occupied.end() && it->second;
  }

  friend bool operator==(const OccupancySnapshot&, const OccupancySnapshot&) = default;
};

class OrderingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FusionAnomaly {
  double timestamp = 0.0;
  std::string source;
  std::string description;
};

/// Per-zone occupancy from timestamped detections. Every detection opens a
/// half-open hold window [t, t + hold); a snapshot is occupied while any window
/// covers `now`. Windows only ever grow, so extra detections can never turn an
/// occupied verdict into a vacant one.
class OccupancyFusion {
 public:
  OccupancyFusion(const RoomModel& room, FusionParams params);

  /// Throws OrderingError if `event` is older than the last event seen from the
  /// same source; the state is left untouched in that case.
  void ingest(const SensorEvent& event);

  OccupancySnapshot snapshot(double now) const;

  const FusionParams& params() const { return params_; }
  const std::vector<FusionAnomaly>& anomalies() const { return anomalies_; }

 private:
  static constexpr double kNever = -std::numeric_limits<double>::infinity();

  void mark_motion(const SensorEvent& e, double hold);
  void anomaly(const SensorEvent& e, std::string description);
  double hold_for(const SensorSpec* sensor, double base) const;

  FusionParams params_;
  std::map<std::string, SensorSpec> sensors_;
  std::vector<std::string> zone_ids_;

  std::map<std::string, double> last_timestamp_;
  std::map<std::string, double> source_active_until_;
  double motion_until_ = kNever;
  double presence_until_ = kNever;
  std::map<std::string, double> zone_until_;
  double approach_until_ = kNever;
  bool manual_kill_ = false;
  std::optional<double> last_motion_time_;
  std::vector<FusionAnomaly> anomalies_;
};

}  // namespace uvc
