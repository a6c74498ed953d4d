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

#include "uvc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "uvc/config.hpp"
#include "uvc/sensor_models.hpp"

namespace uvc {

namespace {

constexpr double kTimeSlack = 1e-9;

bool same_verdict(const OccupancySnapshot& a, const OccupancySnapshot& b) {
  return a.room_occupied == b.room_occupied && a.room_motion == b.room_motion &&
         a.desk_zone_occupied == b.desk_zone_occupied &&
         a.approach_detected == b.approach_detected && a.manual_kill == b.manual_kill &&
         a.contributing_sources == b.contributing_sources;
}

// Per-sensor Poisson arrival schedule for spurious detections.
struct FalsePositiveSource {
  const SensorSpec* sensor = nullptr;
  double next = std::numeric_limits<double>::infinity();
};

std::vector<FalsePositiveSource> make_fp_sources(const Scenario& s, Rng& rng) {
  std::vector<FalsePositiveSource> out;
  const double rate = s.noise.false_positive_rate_per_hour / 3600.0;
  for (const auto& sensor : s.room.sensors) {
    if (sensor.kind != SensorKind::PIR && sensor.kind != SensorKind::Ultrasonic) continue;
    FalsePositiveSource src{&sensor};
    if (rate > 0.0) src.next = std::exponential_distribution<double>(rate)(rng);
    out.push_back(src);
  }
  return out;
}

std::vector<OccupantSample> sample_occupants(const Scenario& s, double t) {
  std::vector<OccupantSample> out;
  out.reserve(s.occupants.size());
  for (const auto& o : s.occupants)
    out.push_back({o.occupant_id, o.position_at(t), o.inside_at(t, s.room), o.carries_beacon});
  return out;
}

std::vector<LampSpec> lit_lamps(const RoomModel& room, const ControllerState& state) {
  std::vector<LampSpec> out;
  for (const auto& lamp : room.lamps)
    if (state.is_running(lamp.id)) out.push_back(lamp);
  return out;
}

// Scope of a downward lamp: the room for ceiling lamps, the desk zone for desk lamps.
struct Scope {
  const LampSpec* lamp = nullptr;
  const DeskZone* zone = nullptr;
};

bool in_scope(const Scope& scope, const OccupantScript& o, const RoomModel& room, double t) {
  if (!o.inside_at(t, room)) return false;
  return scope.zone == nullptr || scope.zone->contains(o.position_at(t));
}

// First time in (lo, hi] at which the occupant is inside the scope, given
// outside at lo and inside at hi.
double crossing_time(const Scope& scope, const OccupantScript& o, const RoomModel& room,
                     double lo, double hi) {
  for (int i = 0; i < 50 && hi - lo > 1e-9; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (in_scope(scope, o, room, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

std::string_view to_string(EventOrigin origin) {
  switch (origin) {
    case EventOrigin::Occupant: return "occupant";
    case EventOrigin::FalsePositive: return "false_positive";
    case EventOrigin::Injected: return "injected";
  }
  return "occupant";
}

std::vector<ProbeSpec> default_probes(const RoomModel& room, double probe_height) {
  std::vector<ProbeSpec> out{{"room_center", room.center(probe_height)}};
  for (const auto& z : room.desk_zones)
    if (z.has_desk_lamp)
      out.push_back({z.desk_id + "_center", {z.center.x, z.center.y, probe_height}});
  return out;
}

LampOnIntervals lamp_on_intervals(std::span<const LampCommand> commands, double end_time) {
  LampOnIntervals out;
  std::map<std::string, double> open;
  for (const auto& c : commands) {
    if (c.action == LampAction::TurnOn) {
      open.try_emplace(c.lamp_id, c.timestamp);
    } else if (auto it = open.find(c.lamp_id); it != open.end()) {
      if (c.timestamp > it->second) out[c.lamp_id].push_back({it->second, c.timestamp});
      open.erase(it);
    }
  }
  for (const auto& [id, start] : open)
    if (end_time > start) out[id].push_back({start, end_time});
  return out;
}

SimulationResult simulate(const Scenario& s) {
  require_valid(validate(s));

  Rng rng(s.seed);
  OccupancyFusion fusion(s.room, s.fusion);
  Controller controller(s.room, s.policy, s.start_epoch);
  ControllerState state = controller.initial_state();

  Timeline tl;
  tl.tick = s.tick;
  const auto last_tick = static_cast<std::size_t>(std::llround(s.duration / s.tick));
  tl.tick_count = last_tick + 1;
  tl.end_time = tl.time_at(last_tick);
  tl.probes = default_probes(s.room, s.models.probe_height);

  auto fp_sources = make_fp_sources(s, rng);
  auto injected = s.injected_events;
  std::stable_sort(injected.begin(), injected.end(), event_order);
  std::size_t next_injected = 0;

  const auto advert_every = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(s.models.ble_advert_period / s.tick)));
  const auto checkpoint_every =
      s.checkpoint_interval > 0.0
          ? std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(s.checkpoint_interval / s.tick)))
          : 0;

  std::vector<const SensorSpec*> pirs, uss, bles;
  for (const auto& sensor : s.room.sensors) {
    if (sensor.kind == SensorKind::PIR) pirs.push_back(&sensor);
    if (sensor.kind == SensorKind::Ultrasonic) uss.push_back(&sensor);
    if (sensor.kind == SensorKind::BleReceiver) bles.push_back(&sensor);
  }

  std::vector<OccupantSample> previous = sample_occupants(s, 0.0);
  std::vector<LampSpec> lit;
  std::vector<SensorEvent> batch;

  for (std::size_t i = 0; i <= last_tick; ++i) {
    const double t = tl.time_at(i);
    auto current = sample_occupants(s, t);
    batch.clear();
    std::vector<EventOrigin> origins;
    auto emit = [&](SensorEvent e, EventOrigin origin) {
      batch.push_back(std::move(e));
      origins.push_back(origin);
    };

    for (const auto* sensor : pirs)
      if (auto e = pir_model(*sensor, previous, current, s.tick, t, s.models, s.noise, rng))
        emit(std::move(*e), EventOrigin::Occupant);
    for (const auto* sensor : uss)
      if (auto e = us_model(*sensor, current, t)) emit(std::move(*e), EventOrigin::Occupant);
    if (i % advert_every == 0)
      for (const auto* rx : bles)
        for (const auto& occ : current)
          if (occ.carries_beacon)
            if (auto e = ble_model(*rx, occ, s.fusion, s.noise.rssi_sigma_db, t, rng))
              emit(std::move(*e), EventOrigin::Occupant);

    const double fp_rate = s.noise.false_positive_rate_per_hour / 3600.0;
    for (auto& src : fp_sources) {
      bool fired = false;
      while (src.next <= t + kTimeSlack) {
        fired = true;
        src.next += std::exponential_distribution<double>(fp_rate)(rng);
      }
      if (!fired) continue;
      if (src.sensor->kind == SensorKind::PIR)
        emit({t, src.sensor->id, PirMotion{}}, EventOrigin::FalsePositive);
      else
        emit({t, src.sensor->id, UsPresence{0.5 * src.sensor->max_range}},
             EventOrigin::FalsePositive);
    }

    while (next_injected < injected.size() &&
           injected[next_injected].timestamp <= t + kTimeSlack)
      emit(injected[next_injected++], EventOrigin::Injected);

    std::vector<std::size_t> order(batch.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return event_order(batch[a], batch[b]);
    });
    for (auto k : order) {
      // A spurious detection may coincide with a modeled one from the same sensor.
      if (origins[k] == EventOrigin::FalsePositive) {
        bool duplicate = false;
        for (const auto& e : batch)
          if (&e != &batch[k] && e.source == batch[k].source &&
              e.timestamp == batch[k].timestamp && e.payload.index() == batch[k].payload.index())
            duplicate = true;
        if (duplicate) continue;
      }
      fusion.ingest(batch[k]);
      tl.events.push_back({batch[k], origins[k]});
    }

    auto snap = fusion.snapshot(t);
    if (tl.snapshots.empty() || !same_verdict(tl.snapshots.back(), snap))
      tl.snapshots.push_back(snap);

    auto step = controller.step(state, snap, t);
    state = std::move(step.state);
    if (!step.commands.empty()) {
      tl.commands.insert(tl.commands.end(), step.commands.begin(), step.commands.end());
      lit = lit_lamps(s.room, state);
    }

    ProbeSample probe{t, {}};
    probe.values.reserve(tl.probes.size());
    for (const auto& p : tl.probes) probe.values.push_back(irradiance_at_point(lit, p.position));
    tl.probe_samples.push_back(std::move(probe));

    if (checkpoint_every != 0 && i > 0 && i % checkpoint_every == 0) {
      auto grid = accumulate_dose(make_floor_grid(s.room), s.room.lamps,
                                  lamp_on_intervals(tl.commands, t));
      const auto& d = grid.accumulated_dose;
      DoseCheckpoint cp{t, *std::min_element(d.begin(), d.end()),
                        *std::max_element(d.begin(), d.end()), 0.0};
      for (double v : d) cp.mean_dose += v;
      cp.mean_dose /= static_cast<double>(d.size());
      tl.checkpoints.push_back(cp);
    }

    previous = std::move(current);
  }
  tl.anomalies = fusion.anomalies();

  SimulationResult result;
  result.dose = accumulate_dose(make_floor_grid(s.room), s.room.lamps,
                                lamp_on_intervals(tl.commands, tl.end_time));
  result.safety = safety_check(tl, s);
  result.timeline = std::move(tl);
  return result;
}

SafetyReport safety_check(const Timeline& tl, const Scenario& s) {
  SafetyReport report;
  report.reaction_deadline = s.policy.reaction_deadline;

  std::vector<Scope> scopes;
  std::map<std::string, std::size_t> scope_index;
  for (const auto& lamp : s.room.lamps) {
    if (!lamp.emits_downward) continue;
    Scope scope{&lamp, nullptr};
    if (lamp.tier == LampTier::Desk) scope.zone = s.room.find_zone(lamp.desk_id);
    scope_index[lamp.id] = scopes.size();
    scopes.push_back(scope);
  }

  const std::size_t n_occ = s.occupants.size();
  const std::size_t n_scope = scopes.size();
  const double never = -std::numeric_limits<double>::infinity();

  // Per (occupant, scope) tracking.
  std::vector<char> was_inside(n_occ * n_scope, 0);
  std::vector<double> entry(n_occ * n_scope, never);
  std::vector<double> first_tick(n_occ * n_scope, never);
  std::vector<long> open_episode(n_occ * n_scope, -1);
  std::vector<char> violating(n_occ * n_scope, 0);

  std::vector<char> on_prev(n_scope, 0), on_now(n_scope, 0);
  std::size_t next_cmd = 0;
  for (const auto& o : s.occupants) report.occupant_dose[o.occupant_id] = 0.0;

  for (std::size_t i = 0; i < tl.tick_count; ++i) {
    const double t = tl.time_at(i);
    on_prev = on_now;
    while (next_cmd < tl.commands.size() && tl.commands[next_cmd].timestamp <= t + kTimeSlack) {
      const auto& c = tl.commands[next_cmd++];
      if (auto it = scope_index.find(c.lamp_id); it != scope_index.end())
        on_now[it->second] = c.action == LampAction::TurnOn ? 1 : 0;
    }

    for (std::size_t oi = 0; oi < n_occ; ++oi) {
      const auto& occ = s.occupants[oi];
      const bool in_room = occ.inside_at(t, s.room);
      const Point3 pos = occ.position_at(t);
      const Point3 chest{pos.x, pos.y, s.models.chest_height};

      for (std::size_t si = 0; si < n_scope; ++si) {
        const auto k = oi * n_scope + si;
        const bool inside = in_scope(scopes[si], occ, s.room, t);
        if (inside && !was_inside[k]) {
          entry[k] = i == 0 ? never
                            : crossing_time(scopes[si], occ, s.room, tl.time_at(i - 1), t);
          first_tick[k] = i == 0 ? never : t;
        }
        const bool exposed = inside && (on_now[si] || (i > 0 && on_prev[si]));
        if (exposed) {
          if (open_episode[k] < 0) {
            open_episode[k] = static_cast<long>(report.exposures.size());
            report.exposures.push_back({occ.occupant_id, scopes[si].lamp->id, entry[k],
                                        first_tick[k], t, false});
            violating[k] = 0;
          }
          report.exposures[static_cast<std::size_t>(open_episode[k])].last_exposed_tick = t;
          const double latency = t - entry[k];
          if (latency > report.reaction_deadline) {
            ++report.violating_ticks;
            if (!violating[k]) {
              violating[k] = 1;
              const double e = on_now[si] ? lamp_irradiance(*scopes[si].lamp, chest) : 0.0;
              report.violations.push_back(
                  {t, occ.occupant_id, scopes[si].lamp->id, e, latency});
            }
          }
        } else if (open_episode[k] >= 0) {
          report.exposures[static_cast<std::size_t>(open_episode[k])].ended_by_lamp_off =
              inside && !on_now[si];
          open_episode[k] = -1;
          violating[k] = 0;
        }
        was_inside[k] = inside;
      }

      if (in_room && i + 1 < tl.tick_count) {
        double e = 0.0;
        for (std::size_t si = 0; si < n_scope; ++si)
          if (on_now[si]) e += lamp_irradiance(*scopes[si].lamp, chest);
        report.occupant_dose[occ.occupant_id] += e * tl.tick;
      }
    }
  }
  return report;
}

}  // namespace uvc
