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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "uvc/paper_scenarios.hpp"
#include "uvc/sensor_models.hpp"
#include "uvc/simulator.hpp"
#include "uvc/timeline_io.hpp"

using namespace uvc;

namespace {

double on_seconds(const Timeline& tl, LampTier tier, const RoomModel& room) {
  double total = 0.0;
  for (const auto& [id, iv] : lamp_on_intervals(tl.commands, tl.end_time))
    if (room.find_lamp(id)->tier == tier)
      for (const auto& x : iv) total += x.duration();
  return total;
}

std::string all_csv(const Timeline& tl) {
  std::ostringstream o;
  write_events_csv(o, tl);
  write_snapshots_csv(o, tl);
  write_command_log(o, tl.commands);
  write_probes_csv(o, tl);
  write_checkpoints_csv(o, tl);
  write_merged_timeline_csv(o, tl);
  return o.str();
}

bool lit_at(const std::vector<LampCommand>& log, const std::string& lamp, double t) {
  bool on = false;
  for (const auto& c : log) {
    if (c.timestamp > t + 1e-9) break;
    if (c.lamp_id == lamp) on = c.action == LampAction::TurnOn;
  }
  return on;
}

}  // namespace

TEST(SensorModels, PirNeedsMovementInView) {
  const auto room = paper_default_room();
  const auto& pir = *room.find_sensor("pir-1");
  Rng rng(1);
  const SensorModelParams m;
  const NoiseParams n;
  std::vector<OccupantSample> a{{"o", {2, 2, 1.1}, true, false}};
  auto b = a;
  EXPECT_FALSE(pir_model(pir, a, b, 0.1, 1.0, m, n, rng));
  b[0].position.x += 0.05;
  EXPECT_TRUE(pir_model(pir, a, b, 0.1, 1.0, m, n, rng));
  b[0].inside_room = false;
  EXPECT_FALSE(pir_model(pir, a, b, 0.1, 1.0, m, n, rng));
}

TEST(SensorModels, PirMissProbabilityOne) {
  const auto room = paper_default_room();
  Rng rng(1);
  NoiseParams n;
  n.pir_miss_probability = 1.0;
  std::vector<OccupantSample> a{{"o", {2, 2, 1.1}, true, false}};
  auto b = a;
  b[0].position.x += 0.5;
  EXPECT_FALSE(pir_model(*room.find_sensor("pir-1"), a, b, 0.1, 1.0, {}, n, rng));
}

TEST(SensorModels, PirConesCoverTheRoomAtChestHeight) {
  const auto room = paper_default_room();
  for (double x = 0.0; x <= room.width + 1e-9; x += 0.05)
    for (double y = 0.0; y <= room.length + 1e-9; y += 0.05) {
      const Point3 p{x, y, 1.1};
      bool seen = false;
      for (const auto& s : room.sensors)
        if (s.kind == SensorKind::PIR && in_view(s, p)) seen = true;
      ASSERT_TRUE(seen) << x << "," << y;
    }
}

TEST(SensorModels, UltrasonicReportsNearestInCone) {
  const auto room = paper_default_room();
  const auto& us = *room.find_sensor("us-desk-2");
  std::vector<OccupantSample> c{{"a", kDesk2Seat, true, false}, {"b", {2.15, 4.0, 1.1}, true, false}};
  const auto e = us_model(us, c, 3.0);
  ASSERT_TRUE(e);
  EXPECT_NEAR(std::get<UsPresence>(e->payload).distance, 1.25, 1e-12);
  c = {{"a", {0.5, 4.3, 1.1}, true, false}};
  EXPECT_FALSE(us_model(us, c, 3.0));
}

TEST(SensorModels, BleNoiselessMatchesPathLoss) {
  const auto room = paper_default_room();
  const auto& rx = *room.find_sensor("ble-rx");
  Rng rng(1);
  const OccupantSample o{"o", rx.position + Point3{0, -3.0, 0}, false, true};
  const auto e = ble_model(rx, o, FusionParams{}, 0.0, 2.0, rng);
  ASSERT_TRUE(e);
  const auto& b = std::get<BleAdvert>(e->payload);
  EXPECT_EQ(b.beacon_id, "o");
  EXPECT_NEAR(rssi_to_distance(b.rssi, FusionParams{}), 3.0, 1e-12);
}

TEST(LampOnIntervals, PairsCommands) {
  const std::vector<LampCommand> log{
      {1, "a", LampAction::TurnOn, CommandReason::CycleStart},
      {2, "b", LampAction::TurnOn, CommandReason::CycleStart},
      {5, "a", LampAction::TurnOff, CommandReason::CycleComplete},
      {7, "a", LampAction::TurnOn, CommandReason::CycleStart}};
  const auto iv = lamp_on_intervals(log, 10);
  EXPECT_EQ(iv.at("a"), (std::vector<OnInterval>{{1, 5}, {7, 10}}));
  EXPECT_EQ(iv.at("b"), (std::vector<OnInterval>{{2, 10}}));
}

TEST(Simulate, OccupantAtGuardedDeskKeepsDownwardLampsDark) {
  const auto s = paper_scenario('B');
  const auto r = simulate(s);
  EXPECT_TRUE(r.safety.pass());
  EXPECT_EQ(on_seconds(r.timeline, LampTier::Ceiling, s.room), 0.0);
  EXPECT_EQ(on_seconds(r.timeline, LampTier::Desk, s.room), 0.0);
  ASSERT_EQ(r.timeline.probe_samples.size(), 72001u);
  for (const auto& p : r.timeline.probe_samples)
    for (double v : p.values) ASSERT_EQ(v, 0.0) << p.timestamp;
}

TEST(Simulate, SameSeedSameBytes) {
  for (char name : {'A', 'C'}) {
    const auto s = paper_scenario(name, 42);
    EXPECT_EQ(all_csv(simulate(s).timeline), all_csv(simulate(s).timeline)) << name;
  }
  EXPECT_NE(all_csv(simulate(paper_scenario('A', 1)).timeline),
            all_csv(simulate(paper_scenario('A', 2)).timeline));
}

TEST(Simulate, BypassedInterlockIsCaught) {
  auto s = paper_scenario('B');
  s.policy.test_only_bypass_interlock = true;
  const auto r = simulate(s);
  ASSERT_FALSE(r.safety.pass());
  EXPECT_GT(r.safety.occupant_dose.at("occupant-1"), 0.0);
  EXPECT_GT(r.safety.violations.front().received_irradiance, 0.0);
}

TEST(Simulate, ZeroDeadlineFailsOnReentry) {
  auto s = paper_scenario('D');
  EXPECT_TRUE(simulate(s).safety.pass());
  s.policy.reaction_deadline = 0.0;
  EXPECT_FALSE(simulate(s).safety.pass());
}

TEST(Simulate, DoseMatchesIntervalsAndCheckpointsGrow) {
  const auto s = paper_scenario('D');
  const auto r = simulate(s);
  const auto expected = accumulate_dose(make_floor_grid(s.room), s.room.lamps,
                                        lamp_on_intervals(r.timeline.commands, r.timeline.end_time));
  EXPECT_EQ(r.dose.accumulated_dose, expected.accumulated_dose);
  ASSERT_EQ(r.timeline.checkpoints.size(), 12u);
  for (std::size_t i = 1; i < r.timeline.checkpoints.size(); ++i) {
    EXPECT_GE(r.timeline.checkpoints[i].min_dose, r.timeline.checkpoints[i - 1].min_dose);
    EXPECT_GE(r.timeline.checkpoints[i].max_dose, r.timeline.checkpoints[i - 1].max_dose);
  }
  EXPECT_NEAR(r.timeline.checkpoints.back().max_dose,
              *std::max_element(r.dose.accumulated_dose.begin(), r.dose.accumulated_dose.end()),
              1e-9);
}

TEST(Simulate, SnapshotsRecordChangesOnly) {
  const auto r = simulate(paper_scenario('C'));
  const auto& snaps = r.timeline.snapshots;
  ASSERT_GE(snaps.size(), 3u);
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    EXPECT_LT(snaps[i - 1].timestamp, snaps[i].timestamp);
    EXPECT_FALSE(snaps[i - 1].room_occupied == snaps[i].room_occupied &&
                 snaps[i - 1].room_motion == snaps[i].room_motion &&
                 snaps[i - 1].approach_detected == snaps[i].approach_detected &&
                 snaps[i - 1].desk_zone_occupied == snaps[i].desk_zone_occupied &&
                 snaps[i - 1].contributing_sources == snaps[i].contributing_sources);
  }
}

TEST(Simulate, InjectedGarbageIsFailSafe) {
  auto s = paper_scenario('C');
  s.injected_events.push_back({3000.0, "pir-2", GarbledPayload{"%%"}});
  const auto r = simulate(s);
  ASSERT_FALSE(r.timeline.anomalies.empty());
  EXPECT_EQ(r.timeline.anomalies.front().timestamp, 3000.0);
  EXPECT_TRUE(r.safety.pass());
}

TEST(SafetyCheck, FlagsLateLampOff) {
  const auto room = paper_default_room();
  Scenario s;
  s.room = room;
  s.duration = 20;
  s.occupants.push_back({"o", false, {{0, {2, -2, 1.1}, false}, {4, {2, 2, 1.1}, true}, {20, {2, 2, 1.1}, true}}});
  Timeline tl;
  tl.tick = 0.1;
  tl.tick_count = 201;
  tl.end_time = 20;
  tl.commands = {{0.0, "ceiling-1", LampAction::TurnOn, CommandReason::CycleStart},
                 {3.5, "ceiling-1", LampAction::TurnOff, CommandReason::OccupancyInterrupt}};
  // Entry at t = 2: off 1.5 s later.
  auto report = safety_check(tl, s);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].lamp_id, "ceiling-1");
  EXPECT_NEAR(report.violations[0].timestamp, 3.1, 1e-9);
  ASSERT_EQ(report.exposures.size(), 1u);
  EXPECT_NEAR(report.exposures[0].entry_time, 2.0, 1e-6);
  EXPECT_NEAR(report.exposures[0].first_inside_tick, 2.0, 1e-9);
  EXPECT_NEAR(report.exposures[0].last_exposed_tick, 3.5, 1e-9);
  EXPECT_TRUE(report.exposures[0].ended_by_lamp_off);
  EXPECT_GT(report.occupant_dose.at("o"), 0.0);

  tl.commands[1].timestamp = 2.9;
  report = safety_check(tl, s);
  EXPECT_TRUE(report.pass());
}

TEST(SafetyCheck, DeskLampScopeIsItsZone) {
  const auto room = paper_default_room();
  Scenario s;
  s.room = room;
  s.duration = 10;
  s.occupants.push_back({"o", false, {{0, kDesk1Seat, true}, {10, kDesk1Seat, true}}});
  Timeline tl;
  tl.tick = 0.1;
  tl.tick_count = 101;
  tl.end_time = 10;
  tl.commands = {{0.0, "desk-lamp-2", LampAction::TurnOn, CommandReason::CycleStart}};
  const auto report = safety_check(tl, s);
  EXPECT_TRUE(report.pass());
  EXPECT_EQ(report.occupant_dose.at("o"), 0.0);
}

// Extra detections keep the downward lamps dark for their hold window and
// never break the per-episode budgets.
TEST(SimulateProperty, InsertedDetectionsHoldLampsOff) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (char name : {'C', 'D'}) {
    for (int trial = 0; trial < 3; ++trial) {
      auto s = paper_scenario(name, 100 + trial);
      std::vector<double> at;
      for (int k = 0; k < 6; ++k) at.push_back(std::round(u(rng) * 70000.0) / 10.0);
      std::sort(at.begin(), at.end());
      for (double t : at) s.injected_events.push_back({t, "pir-2", PirMotion{}});
      const auto r = simulate(s);
      EXPECT_TRUE(r.safety.pass());
      for (double t0 : at)
        for (double t = t0; t < t0 + s.fusion.pir_hold - 1e-9; t += 0.1)
          for (const auto& lamp : s.room.lamps)
            if (lamp.emits_downward)
              ASSERT_FALSE(lit_at(r.timeline.commands, lamp.id, t)) << name << " " << lamp.id << " " << t;
      for (const auto& [id, iv] : lamp_on_intervals(r.timeline.commands, r.timeline.end_time)) {
        const auto* lamp = s.room.find_lamp(id);
        const double cap = lamp->tier == LampTier::Ceiling ? s.policy.ceiling_cycle
                           : lamp->tier == LampTier::Desk  ? s.policy.desk_cycle
                                                           : s.policy.upper_room_cycle;
        for (const auto& x : iv) EXPECT_LE(x.duration(), cap + 1e-9);
      }
    }
  }
}

// A spurious detection in an empty room opens a fresh vacancy episode and so
// can add lamp-on time; it never adds time while the room is occupied.
TEST(SimulateProperty, SpuriousDetectionCanAddCycleTime) {
  auto quiet = paper_scenario('C');
  quiet.injected_events.clear();
  const auto spurious = paper_scenario('C');
  const auto a = simulate(quiet);
  const auto b = simulate(spurious);
  EXPECT_GT(on_seconds(b.timeline, LampTier::Ceiling, spurious.room),
            on_seconds(a.timeline, LampTier::Ceiling, quiet.room));
  EXPECT_TRUE(a.safety.pass());
  EXPECT_TRUE(b.safety.pass());
}
