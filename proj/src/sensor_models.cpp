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

#include "uvc/sensor_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uvc {

bool in_view(const SensorSpec& sensor, const Point3& p) {
  if (sensor.max_range > 0.0 && distance(sensor.position, p) > sensor.max_range) return false;
  return angle_off_axis_deg(sensor.position, sensor.aim, p) <= sensor.fov_half_angle;
}

std::optional<SensorEvent> pir_model(const SensorSpec& sensor,
                                     std::span<const OccupantSample> previous,
                                     std::span<const OccupantSample> current, double tick,
                                     double now, const SensorModelParams& models,
                                     const NoiseParams& noise, Rng& rng) {
  const double min_step = models.pir_speed_threshold * tick;
  bool triggered = false;
  for (std::size_t i = 0; i < current.size() && i < previous.size(); ++i) {
    const auto& c = current[i];
    if (!c.inside_room || !in_view(sensor, c.position)) continue;
    if (distance(c.position, previous[i].position) > min_step) {
      triggered = true;
      break;
    }
  }
  if (!triggered) return std::nullopt;
  if (noise.pir_miss_probability > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < noise.pir_miss_probability) return std::nullopt;
  }
  return SensorEvent{now, sensor.id, PirMotion{}};
}

std::optional<SensorEvent> us_model(const SensorSpec& sensor,
                                    std::span<const OccupantSample> current, double now) {
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& c : current) {
    if (!c.inside_room || !in_view(sensor, c.position)) continue;
    nearest = std::min(nearest, distance(sensor.position, c.position));
  }
  if (!std::isfinite(nearest)) return std::nullopt;
  return SensorEvent{now, sensor.id, UsPresence{nearest}};
}

std::optional<SensorEvent> ble_model(const SensorSpec& receiver, const OccupantSample& occupant,
                                     const FusionParams& params, double sigma_db, double now,
                                     Rng& rng) {
  if (!occupant.carries_beacon) return std::nullopt;
  // Below 1 cm the far-field model is meaningless; the clamp keeps log10 finite.
  const double d = std::max(distance(receiver.position, occupant.position), 0.01);
  double rssi = params.ble_ref_rssi_1m - 10.0 * params.ble_path_loss_exponent * std::log10(d);
  if (sigma_db > 0.0) {
    std::normal_distribution<double> shadowing(0.0, sigma_db);
    rssi += shadowing(rng);
  }
  rssi = std::clamp(rssi, kMinRssi, kMaxRssi);
  return SensorEvent{now, receiver.id, BleAdvert{occupant.occupant_id, rssi}};
}

}  // namespace uvc
