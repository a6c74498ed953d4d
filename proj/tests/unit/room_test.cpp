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
#include <string>

#include "uvc/room.hpp"

namespace {

using namespace uvc;

bool has_violation(const RoomModel& m, const std::string& field_prefix) {
  const auto v = validate(m);
  return std::any_of(v.begin(), v.end(),
                     [&](const Violation& x) { return x.field.rfind(field_prefix, 0) == 0; });
}

LampSpec& lamp(RoomModel& m, const std::string& id) {
  return *std::find_if(m.lamps.begin(), m.lamps.end(), [&](auto& l) { return l.id == id; });
}

}  // namespace

TEST(DefaultRoom, IsValid) {
  const auto m = paper_default_room();
  const auto v = validate(m);
  for (const auto& x : v) ADD_FAILURE() << x.field << ": " << x.message;
  EXPECT_DOUBLE_EQ(m.width, 4.3);
  EXPECT_DOUBLE_EQ(m.length, 5.6);
  EXPECT_DOUBLE_EQ(m.ceiling_height, 2.6);
}

TEST(DefaultRoom, LampInventory) {
  const auto m = paper_default_room();
  int ceiling = 0, desk = 0, upper = 0;
  for (const auto& l : m.lamps) {
    ceiling += l.tier == LampTier::Ceiling;
    desk += l.tier == LampTier::Desk;
    upper += l.tier == LampTier::UpperRoom;
    EXPECT_DOUBLE_EQ(l.uvc_efficiency, 0.33);
  }
  EXPECT_EQ(ceiling, 2);
  EXPECT_EQ(desk, 1);
  EXPECT_EQ(upper, 1);
  EXPECT_DOUBLE_EQ(m.find_lamp("ceiling-1")->electrical_power, 36.0);
  EXPECT_DOUBLE_EQ(m.find_lamp("desk-lamp-2")->electrical_power, 24.0);
  EXPECT_DOUBLE_EQ(m.find_lamp("upper-room")->electrical_power, 25.0);
  EXPECT_FALSE(m.find_lamp("upper-room")->emits_downward);
  EXPECT_EQ(m.find_lamp("desk-lamp-2")->desk_id, "desk-2");
  EXPECT_TRUE(m.find_zone("desk-2")->has_desk_lamp);
  EXPECT_FALSE(m.find_zone("desk-1")->has_desk_lamp);
  EXPECT_EQ(m.find_lamp("nope"), nullptr);
}

TEST(DeskZone, ContainsUsesHorizontalDistance) {
  const DeskZone z{"d", {1, 1, 0.7}, 2.0, true};
  EXPECT_TRUE(z.contains({1, 3, 2.5}));
  EXPECT_FALSE(z.contains({1, 3.01, 0.7}));
}

TEST(RoomValidation, LampOutsideRoom) {
  auto m = paper_default_room();
  lamp(m, "ceiling-1").position.z = 2.61;
  EXPECT_TRUE(has_violation(m, "lamps[0].position"));
}

TEST(RoomValidation, EfficiencyRange) {
  auto m = paper_default_room();
  lamp(m, "ceiling-1").uvc_efficiency = 0.0;
  EXPECT_TRUE(has_violation(m, "lamps[0].uvc_efficiency"));
  lamp(m, "ceiling-1").uvc_efficiency = 1.01;
  EXPECT_TRUE(has_violation(m, "lamps[0].uvc_efficiency"));
  lamp(m, "ceiling-1").uvc_efficiency = 1.0;
  EXPECT_FALSE(has_violation(m, "lamps[0]"));
}

TEST(RoomValidation, PowerMustBePositive) {
  auto m = paper_default_room();
  lamp(m, "ceiling-2").electrical_power = 0.0;
  EXPECT_TRUE(has_violation(m, "lamps[1].electrical_power"));
}

TEST(RoomValidation, TierAndDirectionAgree) {
  auto m = paper_default_room();
  lamp(m, "upper-room").emits_downward = true;
  EXPECT_TRUE(has_violation(m, "lamps[3].emits_downward"));
  m = paper_default_room();
  lamp(m, "ceiling-1").emits_downward = false;
  EXPECT_TRUE(has_violation(m, "lamps[0].emits_downward"));
}

TEST(RoomValidation, DeskLampNeedsItsZone) {
  auto m = paper_default_room();
  lamp(m, "desk-lamp-2").desk_id = "desk-9";
  EXPECT_TRUE(has_violation(m, "lamps[2].desk_id"));
  m = paper_default_room();
  m.desk_zones[1].has_desk_lamp = false;
  EXPECT_TRUE(has_violation(m, "lamps[2].desk_id"));
}

TEST(RoomValidation, DuplicateIds) {
  auto m = paper_default_room();
  lamp(m, "ceiling-2").id = "ceiling-1";
  EXPECT_TRUE(has_violation(m, "lamps[1].id"));
  m = paper_default_room();
  m.sensors[1].id = m.sensors[0].id;
  EXPECT_TRUE(has_violation(m, "sensors[1].id"));
}

TEST(RoomValidation, AimMustBeUnit) {
  auto m = paper_default_room();
  m.sensors[0].aim = {0, 0, -2};
  EXPECT_TRUE(has_violation(m, "sensors[0].aim"));
}

TEST(RoomValidation, ExactlyOneManualSwitch) {
  auto m = paper_default_room();
  std::erase_if(m.sensors, [](const SensorSpec& s) { return s.kind == SensorKind::ManualSwitch; });
  EXPECT_TRUE(has_violation(m, "sensors"));
  m = paper_default_room();
  auto extra = *m.find_sensor("manual-switch");
  extra.id = "manual-switch-2";
  m.sensors.push_back(extra);
  EXPECT_TRUE(has_violation(m, "sensors"));
}

TEST(RoomValidation, DownwardLampsNeedMotionAndPresenceSensors) {
  auto m = paper_default_room();
  std::erase_if(m.sensors, [](const SensorSpec& s) { return s.kind == SensorKind::Ultrasonic; });
  EXPECT_TRUE(has_violation(m, "sensors"));
  std::erase_if(m.lamps, [](const LampSpec& l) { return l.emits_downward; });
  m.desk_zones[1].has_desk_lamp = false;
  EXPECT_FALSE(has_violation(m, "sensors"));
}

TEST(RoomValidation, ZonesMustNotContainEachOther) {
  auto m = paper_default_room();
  m.desk_zones[0].exclusion_radius = 4.5;
  EXPECT_TRUE(has_violation(m, "desk_zones[0].exclusion_radius"));
}

TEST(RoomValidation, DoorInsideRoom) {
  auto m = paper_default_room();
  m.door_position = {2.0, -0.5, 0.0};
  EXPECT_TRUE(has_violation(m, "door"));
}

TEST(RoomValidation, UltrasonicNeedsRange) {
  auto m = paper_default_room();
  const_cast<SensorSpec*>(m.find_sensor("us-desk-2"))->max_range = 0.0;
  const auto v = validate(m);
  EXPECT_FALSE(v.empty());
}

TEST(EnumText, RoundTrips) {
  for (auto t : {LampTier::UpperRoom, LampTier::Ceiling, LampTier::Desk})
    EXPECT_EQ(parse_lamp_tier(to_string(t)), t);
  for (auto k : {SensorKind::PIR, SensorKind::Ultrasonic, SensorKind::BleReceiver,
                 SensorKind::ManualSwitch})
    EXPECT_EQ(parse_sensor_kind(to_string(k)), k);
  EXPECT_FALSE(parse_lamp_tier("floor"));
  EXPECT_FALSE(parse_sensor_kind("camera"));
}
