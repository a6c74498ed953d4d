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

#include "uvc/fusion.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace uvc {

bool event_order(const SensorEvent& a, const SensorEvent& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.source < b.source;
}

std::vector<Violation> validate(const FusionParams& p) {
  std::vector<Violation> out;
  auto positive = [&](const char* field, double v) {
    if (!(std::isfinite(v) && v > 0.0)) out.push_back({field, "must be > 0"});
  };
  positive("fusion.pir_hold", p.pir_hold);
  positive("fusion.us_hold", p.us_hold);
  positive("fusion.approach_radius", p.approach_radius);
  positive("fusion.ble_stale_after", p.ble_stale_after);
  if (!(p.ble_path_loss_exponent >= 1.5 && p.ble_path_loss_exponent <= 4.0))
    out.push_back({"fusion.ble_path_loss_exponent", "must lie in [1.5, 4]"});
  if (!(p.ble_ref_rssi_1m >= kMinRssi && p.ble_ref_rssi_1m <= kMaxRssi))
    out.push_back({"fusion.ble_ref_rssi_1m", "must lie in [-120, 0] dBm"});
  return out;
}

double rssi_to_distance(double rssi, const FusionParams& params) {
  return std::pow(10.0, (params.ble_ref_rssi_1m - rssi) /
                            (10.0 * params.ble_path_loss_exponent));
}

OccupancyFusion::OccupancyFusion(const RoomModel& room, FusionParams params)
    : params_(params) {
  for (const auto& s : room.sensors) sensors_.emplace(s.id, s);
  for (const auto& z : room.desk_zones) {
    zone_ids_.push_back(z.desk_id);
    zone_until_[z.desk_id] = kNever;
  }
}

double OccupancyFusion::hold_for(const SensorSpec* sensor, double base) const {
  return sensor == nullptr ? base : std::max(base, sensor->hold_time);
}

void OccupancyFusion::mark_motion(const SensorEvent& e, double hold) {
  const double until = e.timestamp + hold;
  motion_until_ = std::max(motion_until_, until);
  source_active_until_[e.source] = std::max(source_active_until_[e.source], until);
  last_motion_time_ = e.timestamp;
}

void OccupancyFusion::anomaly(const SensorEvent& e, std::string description) {
  anomalies_.push_back({e.timestamp, e.source, std::move(description)});
}

void OccupancyFusion::ingest(const SensorEvent& e) {
  if (!std::isfinite(e.timestamp))
    throw OrderingError(fmt::format("event from '{}' has a non-finite timestamp", e.source));
  if (auto it = last_timestamp_.find(e.source);
      it != last_timestamp_.end() && e.timestamp < it->second) {
    throw OrderingError(fmt::format("event from '{}' at t={} precedes t={}", e.source,
                                    e.timestamp, it->second));
  }
  last_timestamp_[e.source] = e.timestamp;

  const SensorSpec* sensor = nullptr;
  if (auto it = sensors_.find(e.source); it != sensors_.end()) sensor = &it->second;

  auto kind_is = [&](SensorKind k) { return sensor != nullptr && sensor->kind == k; };

  // Any payload we cannot attribute is handled as room motion.
  auto fail_safe = [&](std::string why) {
    anomaly(e, std::move(why));
    mark_motion(e, hold_for(sensor, params_.pir_hold));
  };

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PirMotion>) {
          if (!kind_is(SensorKind::PIR)) return fail_safe("PIR event from non-PIR source");
          mark_motion(e, hold_for(sensor, params_.pir_hold));
        } else if constexpr (std::is_same_v<T, UsPresence>) {
          if (!kind_is(SensorKind::Ultrasonic))
            return fail_safe("ultrasonic event from non-ultrasonic source");
          if (!(std::isfinite(p.distance) && p.distance >= 0.0))
            return fail_safe(fmt::format("ultrasonic distance {} out of range", p.distance));
          if (sensor->max_range > 0.0 && p.distance > sensor->max_range) return;
          const double until = e.timestamp + hold_for(sensor, params_.us_hold);
          if (!sensor->desk_id.empty() && zone_until_.count(sensor->desk_id) != 0) {
            auto& z = zone_until_[sensor->desk_id];
            z = std::max(z, until);
          } else {
            presence_until_ = std::max(presence_until_, until);
          }
          source_active_until_[e.source] = std::max(source_active_until_[e.source], until);
          last_motion_time_ = e.timestamp;
        } else if constexpr (std::is_same_v<T, BleAdvert>) {
          if (!kind_is(SensorKind::BleReceiver))
            return fail_safe("BLE advert from non-receiver source");
          if (!(p.rssi >= kMinRssi && p.rssi <= kMaxRssi))
            return fail_safe(fmt::format("rssi {} dBm out of range", p.rssi));
          if (rssi_to_distance(p.rssi, params_) < params_.approach_radius) {
            const double until = e.timestamp + params_.ble_stale_after;
            approach_until_ = std::max(approach_until_, until);
            source_active_until_[e.source] =
                std::max(source_active_until_[e.source], until);
          }
        } else if constexpr (std::is_same_v<T, ManualOff>) {
          if (!kind_is(SensorKind::ManualSwitch)) anomaly(e, "manual off from non-switch source");
          manual_kill_ = true;
        } else if constexpr (std::is_same_v<T, ManualRearm>) {
          if (!kind_is(SensorKind::ManualSwitch)) {
            anomaly(e, "re-arm ignored: source is not the manual switch");
            return;
          }
          manual_kill_ = false;
        } else {
          fail_safe(fmt::format("garbled payload '{}'", p.raw));
        }
      },
      e.payload);
}

OccupancySnapshot OccupancyFusion::snapshot(double now) const {
  OccupancySnapshot s;
  s.timestamp = now;
  s.room_motion = now < motion_until_;
  bool any_zone = false;
  for (const auto& id : zone_ids_) {
    const bool occ = now < zone_until_.at(id);
    s.desk_zone_occupied[id] = occ;
    any_zone = any_zone || occ;
  }
  s.room_occupied = s.room_motion || any_zone || now < presence_until_;
  s.approach_detected = now < approach_until_;
  s.manual_kill = manual_kill_;
  s.last_motion_time = last_motion_time_;
  for (const auto& [source, until] : source_active_until_) {
    if (now < until) s.contributing_sources.push_back(source);
  }
  return s;
}

}  // namespace uvc
