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
#include <random>
#include <span>
#include <string>

#include "uvc/fusion.hpp"
#include "uvc/room.hpp"
#include "uvc/scenario.hpp"

namespace uvc {

using Rng = std::mt19937_64;

/// Where one occupant is at one instant.
struct OccupantSample {
  std::string occupant_id;
  Point3 position;
  bool inside_room = false;
  bool carries_beacon = false;
};

/// True if `p` lies within the sensor's view cone and range.
bool in_view(const SensorSpec& sensor, const Point3& p);

/// Motion detector. Fires when some occupant inside the room and inside the
/// view cone moved more than `speed_threshold * tick` since the previous
/// tick; each firing is then dropped with `miss_probability`. `previous` and
/// `current` are matched by index.
std::optional<SensorEvent> pir_model(const SensorSpec& sensor,
                                     std::span<const OccupantSample> previous,
                                     std::span<const OccupantSample> current, double tick,
                                     double now, const SensorModelParams& models,
                                     const NoiseParams& noise, Rng& rng);

/// Presence detector: reports the nearest occupant inside the room within the
/// cone and `max_range`, moving or not.
std::optional<SensorEvent> us_model(const SensorSpec& receiver,
                                    std::span<const OccupantSample> current, double now);

/// One advert from a beacon-carrying occupant: log-distance path loss plus
/// gaussian shadowing, clamped to [-120, 0] dBm. Walls are ignored.
std::optional<SensorEvent> ble_model(const SensorSpec& receiver, const OccupantSample& occupant,
                                     const FusionParams& params, double sigma_db, double now,
                                     Rng& rng);

}  // namespace uvc
