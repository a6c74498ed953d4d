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
#include <cmath>
#include <random>

#include "uvc/fusion.hpp"
#include "uvc/room.hpp"

using namespace uvc;

namespace {

SensorEvent pir(double t, std::string src = "pir-1") { return {t, std::move(src), PirMotion{}}; }
SensorEvent us(double t, double d = 1.0) { return {t, "us-desk-2", UsPresence{d}}; }
SensorEvent ble(double t, double rssi) { return {t, "ble-rx", BleAdvert{"beacon-1", rssi}}; }

class FusionTest : public ::testing::Test {
 protected:
  RoomModel room = paper_default_room();
  OccupancyFusion f{room, FusionParams{}};
};

// Every field of `a` that signals occupancy is also set in `b`.
bool at_least_as_occupied(const OccupancySnapshot& a, const OccupancySnapshot& b) {
  if (a.room_occupied && !b.room_occupied) return false;
  if (a.room_motion && !b.room_motion) return false;
  if (a.approach_detected && !b.approach_detected) return false;
  if (a.manual_kill && !b.manual_kill) return false;
  for (const auto& [id, occ] : a.desk_zone_occupied)
    if (occ && !b.zone_occupied(id)) return false;
  return true;
}

}  // namespace

TEST_F(FusionTest, EmptyIsVacant) {
  const auto s = f.snapshot(0.0);
  EXPECT_FALSE(s.room_occupied);
  EXPECT_FALSE(s.approach_detected);
  EXPECT_FALSE(s.manual_kill);
  EXPECT_FALSE(s.last_motion_time);
  EXPECT_EQ(s.desk_zone_occupied.size(), 2u);
}

TEST_F(FusionTest, PirHoldIsHalfOpen) {
  f.ingest(pir(10.0));
  EXPECT_TRUE(f.snapshot(10.0).room_occupied);
  EXPECT_TRUE(f.snapshot(24.999).room_motion);
  EXPECT_FALSE(f.snapshot(25.0).room_occupied);
  EXPECT_EQ(f.snapshot(30.0).last_motion_time, 10.0);
}

TEST_F(FusionTest, SensorHoldTimeExtendsParameter) {
  room.sensors[0].hold_time = 40.0;
  OccupancyFusion g(room, FusionParams{});
  g.ingest(pir(0.0, room.sensors[0].id));
  EXPECT_TRUE(g.snapshot(39.9).room_occupied);
  EXPECT_FALSE(g.snapshot(40.0).room_occupied);
}

TEST_F(FusionTest, UltrasonicMarksGuardedZone) {
  f.ingest(us(5.0, 1.25));
  const auto s = f.snapshot(5.0);
  EXPECT_TRUE(s.zone_occupied("desk-2"));
  EXPECT_FALSE(s.zone_occupied("desk-1"));
  EXPECT_TRUE(s.room_occupied);
  EXPECT_FALSE(s.room_motion);
  EXPECT_FALSE(f.snapshot(15.0).zone_occupied("desk-2"));
}

TEST_F(FusionTest, UltrasonicBeyondRangeIgnored) {
  f.ingest(us(5.0, 2.5));
  EXPECT_FALSE(f.snapshot(5.0).room_occupied);
  EXPECT_TRUE(f.anomalies().empty());
}

TEST_F(FusionTest, BleApproachWithinRadius) {
  // -59 dBm at 1 m, exponent 2: -72.9 dBm is about 4.95 m, -73.1 dBm about 5.06 m.
  f.ingest(ble(0.0, -73.1));
  EXPECT_FALSE(f.snapshot(0.0).approach_detected);
  f.ingest(ble(1.0, -72.9));
  EXPECT_TRUE(f.snapshot(1.0).approach_detected);
  EXPECT_TRUE(f.snapshot(10.99).approach_detected);
  EXPECT_FALSE(f.snapshot(11.0).approach_detected);
  EXPECT_FALSE(f.snapshot(5.0).room_occupied);
}

TEST(RssiToDistance, LogDistanceModel) {
  const FusionParams p;
  EXPECT_DOUBLE_EQ(rssi_to_distance(-59.0, p), 1.0);
  EXPECT_NEAR(rssi_to_distance(-79.0, p), 10.0, 1e-12);
  EXPECT_NEAR(rssi_to_distance(-53.0, p), std::pow(10.0, -0.3), 1e-12);
}

TEST(RssiToDistance, StrictlyDecreasingInRssi) {
  FusionParams p;
  for (double n : {1.5, 2.0, 2.7, 4.0}) {
    p.ble_path_loss_exponent = n;
    double prev = std::numeric_limits<double>::infinity();
    for (double r = -120.0; r <= 0.0; r += 0.25) {
      const double d = rssi_to_distance(r, p);
      EXPECT_LT(d, prev);
      prev = d;
    }
  }
}

TEST_F(FusionTest, ManualOffLatchesUntilRearm) {
  f.ingest({1.0, "manual-switch", ManualOff{}});
  EXPECT_TRUE(f.snapshot(1.0).manual_kill);
  EXPECT_TRUE(f.snapshot(1e6).manual_kill);
  f.ingest({2.0, "pir-1", ManualRearm{}});
  EXPECT_TRUE(f.snapshot(2.0).manual_kill);
  EXPECT_FALSE(f.anomalies().empty());
  f.ingest({3.0, "manual-switch", ManualRearm{}});
  EXPECT_FALSE(f.snapshot(3.0).manual_kill);
}

TEST_F(FusionTest, GarbledPayloadCountsAsMotion) {
  f.ingest({4.0, "pir-2", GarbledPayload{"\x01zz"}});
  EXPECT_TRUE(f.snapshot(4.0).room_motion);
  ASSERT_EQ(f.anomalies().size(), 1u);
  EXPECT_EQ(f.anomalies()[0].source, "pir-2");
}

TEST_F(FusionTest, MismatchedPayloadCountsAsMotion) {
  f.ingest({4.0, "ble-rx", PirMotion{}});
  f.ingest({5.0, "unknown-sensor", UsPresence{1.0}});
  f.ingest({6.0, "ble-rx", BleAdvert{"b", 12.0}});
  EXPECT_TRUE(f.snapshot(6.0).room_motion);
  EXPECT_EQ(f.anomalies().size(), 3u);
}

TEST_F(FusionTest, OutOfOrderPerSourceThrows) {
  f.ingest(pir(10.0));
  f.ingest(pir(5.0, "pir-2"));  // other sources keep their own clock
  f.ingest(pir(10.0));          // equal timestamps are fine
  EXPECT_THROW(f.ingest(pir(9.9)), OrderingError);
  EXPECT_THROW(f.ingest(pir(std::nan(""), "pir-2")), OrderingError);
}

TEST_F(FusionTest, ContributingSources) {
  f.ingest(pir(0.0));
  f.ingest(us(1.0));
  const auto s = f.snapshot(2.0);
  EXPECT_EQ(s.contributing_sources, (std::vector<std::string>{"pir-1", "us-desk-2"}));
  EXPECT_TRUE(f.snapshot(20.0).contributing_sources.empty());
}

// Adding detections can only make every snapshot at least as occupied.
TEST(FusionProperty, MoreEventsNeverLessOccupied) {
  const auto room = paper_default_room();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_event = [&](double t) -> SensorEvent {
    switch (static_cast<int>(u(rng) * 6)) {
      case 0: return pir(t, u(rng) < 0.5 ? "pir-1" : "pir-2");
      case 1: return us(t, u(rng) * 3.0);
      case 2: return ble(t, -40.0 - 50.0 * u(rng));
      case 3: return {t, "manual-switch", ManualOff{}};
      case 4: return {t, "manual-switch", ManualRearm{}};
      default: return {t, "pir-1", GarbledPayload{"?"}};
    }
  };
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SensorEvent> base, extra;
    for (int i = 0; i < 20; ++i) base.push_back(random_event(u(rng) * 200.0));
    for (int i = 0; i < 5; ++i) {
      auto e = random_event(u(rng) * 200.0);
      // Re-arms are the one input that clears state; keep them out of the extras.
      if (std::holds_alternative<ManualRearm>(e.payload)) e.payload = PirMotion{}, e.source = "pir-2";
      extra.push_back(e);
    }
    std::vector<SensorEvent> more = base;
    more.insert(more.end(), extra.begin(), extra.end());
    std::stable_sort(base.begin(), base.end(), event_order);
    std::stable_sort(more.begin(), more.end(), event_order);

    OccupancyFusion a(room, FusionParams{}), b(room, FusionParams{});
    std::size_t ia = 0, ib = 0;
    for (double t = 0.0; t <= 230.0; t += 0.5) {
      while (ia < base.size() && base[ia].timestamp <= t) a.ingest(base[ia++]);
      while (ib < more.size() && more[ib].timestamp <= t) b.ingest(more[ib++]);
      const auto sa = a.snapshot(t), sb = b.snapshot(t);
      ASSERT_TRUE(at_least_as_occupied(sa, sb)) << "trial " << trial << " t " << t;
    }
  }
}

TEST(FusionParamsValidation, Ranges) {
  FusionParams p;
  EXPECT_TRUE(validate(p).empty());
  p.pir_hold = 0.0;
  p.ble_path_loss_exponent = 1.0;
  p.ble_ref_rssi_1m = 5.0;
  EXPECT_EQ(validate(p).size(), 3u);
}
