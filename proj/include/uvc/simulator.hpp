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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "uvc/controller.hpp"
#include "uvc/dosimetry.hpp"
#include "uvc/fusion.hpp"
#include "uvc/scenario.hpp"

namespace uvc {

enum class EventOrigin { Occupant, FalsePositive, Injected };

std::string_view to_string(EventOrigin origin);

struct EventRecord {
  SensorEvent event;
  EventOrigin origin = EventOrigin::Occupant;
};

struct ProbeSpec {
  std::string name;
  Point3 position;
};

struct ProbeSample {
  double timestamp = 0.0;
  std::vector<double> values;  // W/m^2, one per ProbeSpec
};

struct DoseCheckpoint {
  double timestamp = 0.0;
  double min_dose = 0.0;
  double max_dose = 0.0;
  double mean_dose = 0.0;
};

/// Everything a run produced, in time order within each record class.
/// Snapshots are stored only when the occupancy verdict changes.
struct Timeline {
  double tick = 0.1;
  std::size_t tick_count = 0;  // ticks 0..tick_count-1 were simulated
  double end_time = 0.0;
  std::vector<EventRecord> events;
  std::vector<OccupancySnapshot> snapshots;
  std::vector<LampCommand> commands;
  std::vector<ProbeSpec> probes;
  std::vector<ProbeSample> probe_samples;
  std::vector<DoseCheckpoint> checkpoints;
  std::vector<FusionAnomaly> anomalies;

  double time_at(std::size_t i) const { return static_cast<double>(i) * tick; }
};

struct SafetyViolation {
  double timestamp = 0.0;
  std::string occupant_id;
  std::string lamp_id;
  double received_irradiance = 0.0;  // W/m^2 at chest height
  double latency = 0.0;              // s since the occupant entered the lamp's scope
};

/// A stretch of ticks during which an occupant was inside a lamp's scope
/// (room for ceiling lamps, desk zone for desk lamps) while it was lit.
struct ExposureEpisode {
  std::string occupant_id;
  std::string lamp_id;
  double entry_time = 0.0;        // interpolated crossing into the scope
  double first_inside_tick = 0.0;  // first tick observed inside the scope
  double last_exposed_tick = 0.0;
  bool ended_by_lamp_off = false;

  double latency_from_entry() const { return last_exposed_tick - entry_time; }
  double latency_from_first_tick() const { return last_exposed_tick - first_inside_tick; }
};

struct SafetyReport {
  std::vector<SafetyViolation> violations;
  std::size_t violating_ticks = 0;
  std::map<std::string, double> occupant_dose;  // J/m^2
  std::vector<ExposureEpisode> exposures;
  double reaction_deadline = 1.0;

  bool pass() const { return violations.empty(); }
};

struct SimulationResult {
  Timeline timeline;
  SafetyReport safety;
  DoseGrid dose;
};

/// Fixed-step run: occupants move, sensor models fire, fusion and the
/// controller react, lamps switch, probes and dose are recorded. A pure
/// function of `scenario` (seed included). Throws ValidationError if the
/// scenario is invalid.
SimulationResult simulate(const Scenario& scenario);

/// Replays lamp state from the command log and checks, tick by tick, that no
/// occupant was inside a lit lamp's scope for longer than the reaction
/// deadline; integrates occupant exposure at chest height.
SafetyReport safety_check(const Timeline& timeline, const Scenario& scenario);

/// Converts a command log into per-lamp on intervals; lamps still on at
/// `end_time` are closed there.
LampOnIntervals lamp_on_intervals(std::span<const LampCommand> commands, double end_time);

/// Probes at `probe_height`: room center, then the center of every desk zone
/// that has a lamp.
std::vector<ProbeSpec> default_probes(const RoomModel& room, double probe_height);

}  // namespace uvc
