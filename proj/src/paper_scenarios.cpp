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

#include "uvc/paper_scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace uvc {

PathBuilder::PathBuilder(const RoomModel& room, Point3 start, double t0)
    : room_(&room), p_(start), t_(t0) {
  push();
}

void PathBuilder::push() { points_.push_back({t_, p_, room_->contains_plan(p_)}); }

PathBuilder& PathBuilder::walk(Point3 to, double speed) {
  const double d = distance(p_, to);
  if (d == 0.0) return *this;
  t_ += d / speed;
  p_ = to;
  push();
  return *this;
}

PathBuilder& PathBuilder::stay(double seconds) {
  if (seconds <= 0.0) return *this;
  t_ += seconds;
  push();
  return *this;
}

PathBuilder& PathBuilder::stay_until(double t) { return stay(t - t_); }

PathBuilder& PathBuilder::fidget(double amplitude, double speed) {
  const Point3 home = p_;
  walk(home + Point3{amplitude, 0.0, 0.0}, speed);
  return walk(home, speed);
}

namespace {

constexpr double kWalk = 1.0;  // m/s

Scenario base(char name, std::uint64_t seed) {
  Scenario s;
  s.name = std::string("scenario-") + name;
  s.room = paper_default_room();
  double offset = 0.0;
  s.start_epoch = parse_iso8601(kPaperStart, &offset);
  s.policy.tz_offset = offset;
  s.duration = 7200.0;
  s.tick = 0.1;
  s.seed = seed;
  s.noise.rssi_sigma_db = 2.0;
  s.noise.pir_miss_probability = 0.0;
  s.noise.false_positive_rate_per_hour = 0.5;
  return s;
}

const Point3 kInsideDoor{2.15, 0.4, 1.1};
const Point3 kOutside{2.15, -4.0, 1.1};

void loop_room(PathBuilder& p, int laps) {
  static const Point3 corners[] = {
      {0.7, 0.7, 1.1}, {3.6, 0.7, 1.1}, {3.6, 2.6, 1.1}, {0.7, 2.6, 1.1}};
  for (int i = 0; i < laps; ++i)
    for (const auto& c : corners) p.walk(c, kWalk);
  p.walk({0.8, 5.0, 1.1}, kWalk).walk({3.5, 5.2, 1.1}, kWalk).walk({2.0, 3.0, 1.1}, kWalk);
}

void leave(PathBuilder& p) { p.walk(kInsideDoor, kWalk).walk(kOutside, kWalk); }

void enter(PathBuilder& p) { p.walk(kInsideDoor, kWalk); }

Scenario scenario_a(std::uint64_t seed) {
  Scenario s = base('A', seed);
  PathBuilder p(s.room, kInsideDoor);
  p.walk(kDesk1Seat, kWalk);
  const double gaps[] = {45, 420, 130, 600, 75, 380, 900, 240, 510, 160, 700, 95, 330, 620};
  std::size_t k = 0;
  while (p.now() < s.duration - 60.0) {
    p.stay(gaps[k % std::size(gaps)]);
    if (k == 6) {
      p.walk({3.8, 2.5, 1.1}, kWalk).walk({0.6, 2.2, 1.1}, kWalk).walk(kDesk1Seat, kWalk);
    } else {
      p.fidget(0.3, 0.3);
    }
    ++k;
  }
  p.stay_until(s.duration);
  s.occupants.push_back({"occupant-1", true, p.build()});
  return s;
}

Scenario scenario_b(std::uint64_t seed) {
  Scenario s = base('B', seed);
  PathBuilder p(s.room, kDesk2Seat);
  const double gaps[] = {300, 600, 250, 800, 150, 450};
  std::size_t k = 0;
  while (p.now() < s.duration - 120.0) {
    p.stay(gaps[k % std::size(gaps)]);
    if (k == 3) {
      p.walk({3.5, 3.5, 1.1}, kWalk).walk(kDesk2Seat, kWalk);
    } else if (k == 7) {
      p.walk({1.0, 2.0, 1.1}, kWalk).walk(kDesk2Seat, kWalk);
    } else {
      p.fidget(0.3, 0.3);
    }
    ++k;
  }
  p.stay_until(s.duration);
  s.occupants.push_back({"occupant-1", true, p.build()});
  return s;
}

Scenario scenario_c(std::uint64_t seed) {
  Scenario s = base('C', seed);
  // The one spurious detection is scripted; random ones would blur the trace.
  s.noise.false_positive_rate_per_hour = 0.0;
  PathBuilder p(s.room, kDesk1Seat);
  p.walk({3.2, 2.2, 1.1}, kWalk).walk({1.2, 2.8, 1.1}, kWalk).walk({2.15, 0.8, 1.1}, kWalk);
  p.walk({2.15, -25.0, 1.1}, kWalk);
  p.stay_until(6868.0);
  p.walk({2.15, -3.0, 1.1}, kWalk).walk({2.15, 0.5, 1.1}, 0.3).walk(kDesk1Seat, kWalk);
  p.stay_until(s.duration);
  s.occupants.push_back({"occupant-1", true, p.build()});
  s.injected_events.push_back({6400.0, "pir-1", PirMotion{}});
  return s;
}

Scenario scenario_d(std::uint64_t seed) {
  Scenario s = base('D', seed);
  PathBuilder p(s.room, kInsideDoor);
  loop_room(p, 2);
  p.walk(kDesk2Seat, kWalk).stay(600.0);
  loop_room(p, 1);
  leave(p);
  p.stay(300.0);  // back while both lamps still run
  enter(p);
  loop_room(p, 2);
  leave(p);
  p.stay(900.0);  // back after the cycle completed
  enter(p);
  loop_room(p, 1);
  p.walk(kDesk2Seat, kWalk).stay(1200.0);
  loop_room(p, 1);
  leave(p);
  p.stay(1500.0);
  enter(p);
  loop_room(p, 3);
  leave(p);
  p.stay(300.0);
  enter(p);
  loop_room(p, 1);
  p.walk(kDesk2Seat, kWalk).stay_until(s.duration);
  s.occupants.push_back({"occupant-1", false, p.build()});
  return s;
}

}  // namespace

Scenario paper_scenario(char name, std::uint64_t seed) {
  switch (name) {
    case 'A': case 'a': return scenario_a(seed);
    case 'B': case 'b': return scenario_b(seed);
    case 'C': case 'c': return scenario_c(seed);
    case 'D': case 'd': return scenario_d(seed);
  }
  throw std::invalid_argument(std::string("unknown built-in scenario '") + name + "'");
}

std::vector<Scenario> paper_scenarios(std::uint64_t seed) {
  return {scenario_a(seed), scenario_b(seed), scenario_c(seed), scenario_d(seed)};
}

Scenario midnight_scenario(std::uint64_t seed) {
  Scenario s = base('C', seed);
  s.name = "midnight";
  double offset = 0.0;
  s.start_epoch = parse_iso8601("2020-09-01T22:00:00+08:00", &offset);
  s.duration = 95400.0;  // to 00:30 two nights later
  s.tick = 0.5;
  s.noise.false_positive_rate_per_hour = 0.0;
  PathBuilder p(s.room, kDesk1Seat);
  p.walk({3.2, 2.2, 1.1}, kWalk).walk({2.15, 0.8, 1.1}, kWalk).walk({2.15, -25.0, 1.1}, kWalk);
  p.stay_until(43200.0);  // 10:00 next day
  p.walk({2.15, -3.0, 1.1}, kWalk).walk(kInsideDoor, kWalk).walk(kDesk2Seat, kWalk);
  p.stay_until(72000.0);  // 18:00
  p.walk(kInsideDoor, kWalk).walk({2.15, -25.0, 1.1}, kWalk).stay_until(s.duration);
  s.occupants.push_back({"occupant-1", true, p.build()});
  return s;
}

namespace {

Point3 outward(const RoomModel& room) {
  const Point3& d = room.door_position;
  const double dist[] = {d.y, room.length - d.y, d.x, room.width - d.x};
  const Point3 dirs[] = {{0, -1, 0}, {0, 1, 0}, {-1, 0, 0}, {1, 0, 0}};
  return dirs[std::min_element(std::begin(dist), std::end(dist)) - std::begin(dist)];
}

}  // namespace

Scenario random_walk_scenario(std::uint64_t seed, const RoomModel& room, double duration) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto chance = [&](double p) { return uni(0.0, 1.0) < p; };

  Scenario s;
  s.name = "random-walk-" + std::to_string(seed);
  s.room = room;
  double offset = 0.0;
  s.start_epoch = parse_iso8601(kPaperStart, &offset) + std::floor(uni(0.0, 86400.0));
  s.policy.tz_offset = offset;
  s.policy.vacancy_grace = uni(20.0, 120.0);
  s.policy.desk_quiet_gap = uni(20.0, 120.0);
  s.policy.ceiling_cycle = uni(120.0, 600.0);
  s.policy.desk_cycle = uni(60.0, 300.0);
  s.duration = duration;
  s.tick = 0.1;
  s.seed = seed;
  s.noise.rssi_sigma_db = 0.0;
  s.noise.pir_miss_probability = 0.0;
  s.noise.false_positive_rate_per_hour = uni(0.0, 6.0);
  s.checkpoint_interval = duration;

  const Point3 out = outward(room);
  const Point3 door{room.door_position.x, room.door_position.y, 1.1};
  const Point3 inner = door + out * -0.4;
  const double margin = 0.3;
  auto random_inside = [&] {
    return Point3{uni(margin, room.width - margin), uni(margin, room.length - margin), 1.1};
  };
  auto far_from_lamp_zones = [&](const Point3& p) {
    for (const auto& z : room.desk_zones)
      if (z.has_desk_lamp && horizontal_distance(p, z.center) <= z.exclusion_radius + margin)
        return false;
    return true;
  };

  std::vector<Point3> seats;
  for (const auto& sensor : room.sensors) {
    if (sensor.kind != SensorKind::Ultrasonic) continue;
    const double reach = std::min(1.25, 0.6 * sensor.max_range);
    Point3 seat = sensor.position + sensor.aim * reach;
    seat.z = 1.1;
    if (room.contains_plan(seat)) seats.push_back(seat);
  }

  const int n = chance(0.5) ? 1 : 2;
  for (int i = 0; i < n; ++i) {
    const bool beacon = chance(0.5);
    const bool starts_inside = chance(0.6);
    auto speed = [&] { return uni(0.4, 1.5); };
    PathBuilder p(room, starts_inside ? random_inside() : door + out * uni(2.0, 10.0));
    bool inside = starts_inside;
    while (p.now() < duration) {
      if (!inside) {
        p.stay(uni(20.0, 600.0));
        p.walk(door + out * uni(1.0, 4.0), speed()).walk(inner, speed());
        inside = true;
        continue;
      }
      const double r = uni(0.0, 1.0);
      if (r < 0.45) {
        p.walk(random_inside(), speed());
      } else if (r < 0.6 && !seats.empty()) {
        const auto& seat = seats[static_cast<std::size_t>(uni(0.0, 1.0) * seats.size()) % seats.size()];
        p.walk(seat, speed()).stay(uni(30.0, 400.0));
      } else if (r < 0.75 && beacon) {
        Point3 spot = random_inside();
        for (int tries = 0; tries < 100 && !far_from_lamp_zones(spot); ++tries) spot = random_inside();
        if (far_from_lamp_zones(spot)) p.walk(spot, speed()).stay(uni(10.0, 300.0));
      } else if (r < 0.9) {
        p.walk(inner, speed()).walk(door + out * uni(2.0, 10.0), speed());
        inside = false;
      } else {
        p.walk(random_inside(), speed()).walk(random_inside(), speed());
      }
    }
    s.occupants.push_back({"occupant-" + std::to_string(i + 1), beacon, p.build()});
  }
  return s;
}

}  // namespace uvc
