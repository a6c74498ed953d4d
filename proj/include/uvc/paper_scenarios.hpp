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

#include <cstdint>
#include <string_view>
#include <vector>

#include "uvc/scenario.hpp"

namespace uvc {

inline constexpr std::string_view kPaperStart = "2020-09-01T10:10:00+08:00";

/// Seat positions at chest height.
inline constexpr Point3 kDesk1Seat{2.15, 1.3, 1.1};
inline constexpr Point3 kDesk2Seat{2.15, 4.3, 1.1};

/// Builds a waypoint script at constant speeds; the inside flag of each
/// waypoint follows the room's floor plan.
class PathBuilder {
 public:
  PathBuilder(const RoomModel& room, Point3 start, double t0 = 0.0);

  PathBuilder& walk(Point3 to, double speed);
  PathBuilder& stay(double seconds);
  PathBuilder& stay_until(double t);
  /// Out-and-back sideways shuffle of `amplitude` metres at `speed`.
  PathBuilder& fidget(double amplitude, double speed);

  double now() const { return t_; }
  Point3 here() const { return p_; }
  std::vector<Waypoint> build() const { return points_; }

 private:
  void push();

  const RoomModel* room_;
  Point3 p_;
  double t_;
  std::vector<Waypoint> points_;
};

/// A: seated at Desk 1 with a beacon, fidgeting; desk lamp cycles around them.
/// B: seated at Desk 2 with a beacon; nothing downward may light.
/// C: occupant leaves, one cycle runs, a spurious detection re-triggers a
///    cycle that the returning beacon carrier interrupts before entering.
/// D: no beacon; repeated exits and re-entries, some during cycles.
Scenario paper_scenario(char name, std::uint64_t seed = 1);
std::vector<Scenario> paper_scenarios(std::uint64_t seed = 1);

/// Scenario C started late in the evening and run past two midnights with a
/// visit on the second day.
Scenario midnight_scenario(std::uint64_t seed = 1);

/// Random occupant walks for fuzzing. Occupants move at 0.4 to 1.5 m/s while
/// inside and only stand still where some sensor can still see them: the
/// ultrasonic-covered seat, or anywhere with a beacon outside every lamp zone.
/// Sensor misses are disabled.
Scenario random_walk_scenario(std::uint64_t seed, const RoomModel& room, double duration);

}  // namespace uvc
