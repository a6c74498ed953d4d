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

#include "uvc/controller.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "csv.hpp"

namespace uvc {

namespace {
constexpr double kSecondsPerDay = 86400.0;
// Runs end at the first step within this of their scheduled end.
constexpr double kEndSlack = 1e-6;
}

std::vector<Violation> validate(const CyclePolicy& p) {
  std::vector<Violation> out;
  auto positive = [&](const char* field, double v) {
    if (!(std::isfinite(v) && v > 0.0)) out.push_back({field, "must be > 0 s"});
  };
  positive("policy.ceiling_cycle", p.ceiling_cycle);
  positive("policy.desk_cycle", p.desk_cycle);
  positive("policy.upper_room_cycle", p.upper_room_cycle);
  positive("policy.upper_room_period", p.upper_room_period);
  positive("policy.vacancy_grace", p.vacancy_grace);
  positive("policy.desk_quiet_gap", p.desk_quiet_gap);
  if (!(p.reaction_deadline >= 0.0 && p.reaction_deadline <= 1.0))
    out.push_back({"policy.reaction_deadline", "must lie in [0, 1] s"});
  if (p.upper_room_cycle > p.upper_room_period)
    out.push_back({"policy.upper_room_cycle", "must not exceed upper_room_period"});
  if (!(std::abs(p.tz_offset) <= 14.0 * 3600.0))
    out.push_back({"policy.tz_offset", "must lie within +/-14 h"});
  return out;
}

std::string_view to_string(LampAction action) {
  return action == LampAction::TurnOn ? "TurnOn" : "TurnOff";
}

std::string_view to_string(CommandReason reason) {
  switch (reason) {
    case CommandReason::CycleStart: return "CycleStart";
    case CommandReason::CycleComplete: return "CycleComplete";
    case CommandReason::OccupancyInterrupt: return "OccupancyInterrupt";
    case CommandReason::ApproachInterrupt: return "ApproachInterrupt";
    case CommandReason::ManualKill: return "ManualKill";
    case CommandReason::MidnightCycle: return "MidnightCycle";
    case CommandReason::HourlySchedule: return "HourlySchedule";
  }
  return "Unknown";
}

std::optional<LampAction> parse_lamp_action(std::string_view text) {
  if (text == "TurnOn") return LampAction::TurnOn;
  if (text == "TurnOff") return LampAction::TurnOff;
  return std::nullopt;
}

std::optional<CommandReason> parse_command_reason(std::string_view text) {
  for (auto r : {CommandReason::CycleStart, CommandReason::CycleComplete,
                 CommandReason::OccupancyInterrupt, CommandReason::ApproachInterrupt,
                 CommandReason::ManualKill, CommandReason::MidnightCycle,
                 CommandReason::HourlySchedule}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

Controller::Controller(const RoomModel& room, CyclePolicy policy, double epoch_at_zero)
    : lamps_(room.lamps), policy_(policy), epoch_at_zero_(epoch_at_zero) {}

double Controller::local_seconds(double now) const {
  return epoch_at_zero_ + now + policy_.tz_offset;
}

std::int64_t Controller::local_day(double now) const {
  return static_cast<std::int64_t>(std::floor(local_seconds(now) / kSecondsPerDay));
}

ControllerState Controller::initial_state() const {
  ControllerState s;
  for (const auto& lamp : lamps_) {
    s.lamps[lamp.id] = LampRun{};
    if (lamp.tier == LampTier::Desk) {
      s.desk_clear_since[lamp.id] = std::nullopt;
      s.desk_cycle_done[lamp.id] = false;
    }
  }
  return s;
}

namespace {

class StepBuilder {
 public:
  StepBuilder(ControllerState state, double now) : state_(std::move(state)), now_(now) {}

  ControllerState& state() { return state_; }

  void turn_off(const std::string& id, CommandReason reason) {
    auto& run = state_.lamps[id];
    if (!run.running) return;
    run.running = false;
    commands_.push_back({now_, id, LampAction::TurnOff, reason});
  }

  void turn_on(const std::string& id, double duration, CommandReason reason) {
    auto& run = state_.lamps[id];
    if (run.running) return;
    run = LampRun{true, now_, now_ + duration, reason};
    commands_.push_back({now_, id, LampAction::TurnOn, reason});
  }

  StepResult finish() && { return {std::move(state_), std::move(commands_)}; }

 private:
  ControllerState state_;
  double now_;
  std::vector<LampCommand> commands_;
};

}  // namespace

StepResult Controller::step(const ControllerState& state, const OccupancySnapshot& input,
                            double now) const {
  StepBuilder b(state, now);
  ControllerState& s = b.state();

  const bool clock_anomaly = !std::isfinite(now) || now < input.timestamp ||
                             (s.last_step && now < *s.last_step);
  if (clock_anomaly) {
    for (const auto& lamp : lamps_) b.turn_off(lamp.id, CommandReason::OccupancyInterrupt);
    return std::move(b).finish();
  }

  const bool crossed_midnight = s.last_step && local_day(now) > local_day(*s.last_step);
  s.last_step = now;

  for (const auto& lamp : lamps_) {
    const auto& run = s.lamps[lamp.id];
    if (run.running && run.ends_at <= now + kEndSlack)
      b.turn_off(lamp.id, CommandReason::CycleComplete);
  }

  if (input.manual_kill) {
    for (const auto& lamp : lamps_) b.turn_off(lamp.id, CommandReason::ManualKill);
    s.manual_killed = true;
    s.armed = false;
    s.midnight_cycle_active = false;
    return std::move(b).finish();
  }
  if (s.manual_killed) {
    // Re-armed: start over as though someone had just been in the room.
    s.manual_killed = false;
    s.armed = true;
    s.was_present = true;
    s.last_room_vacated_at.reset();
    s.post_departure_cycle_done = false;
    for (auto& [id, since] : s.desk_clear_since) since.reset();
    for (auto& [id, done] : s.desk_cycle_done) done = false;
  }

  OccupancySnapshot snap = input;
  if (policy_.test_only_bypass_interlock) {
    snap.room_occupied = false;
    snap.room_motion = false;
    snap.approach_detected = false;
    for (auto& [id, occ] : snap.desk_zone_occupied) occ = false;
  }

  const bool present = snap.room_occupied || snap.approach_detected;
  if (present) {
    const auto reason = snap.room_occupied ? CommandReason::OccupancyInterrupt
                                           : CommandReason::ApproachInterrupt;
    for (const auto& lamp : lamps_) {
      if (lamp.tier == LampTier::Ceiling) b.turn_off(lamp.id, reason);
    }
    s.armed = true;
    s.was_present = true;
    s.last_room_vacated_at.reset();
    s.post_departure_cycle_done = false;
  } else if (s.was_present) {
    s.was_present = false;
    s.last_room_vacated_at = now;
  }

  std::map<std::string, bool> desk_blocked;
  for (const auto& lamp : lamps_) {
    if (lamp.tier != LampTier::Desk) continue;
    const bool blocked = snap.room_motion || snap.zone_occupied(lamp.desk_id);
    desk_blocked[lamp.id] = blocked;
    if (blocked) {
      b.turn_off(lamp.id, CommandReason::OccupancyInterrupt);
      s.desk_clear_since[lamp.id].reset();
      s.desk_cycle_done[lamp.id] = false;
    } else if (!s.desk_clear_since[lamp.id]) {
      s.desk_clear_since[lamp.id] = now;
    }
  }

  if (s.armed) {
    auto start_desk = [&](const LampSpec& lamp, CommandReason reason) {
      if (desk_blocked[lamp.id]) return;
      b.turn_on(lamp.id, policy_.desk_cycle, reason);
      s.desk_cycle_done[lamp.id] = true;
    };

    if (crossed_midnight && s.midnight_cycle_done_for_date != local_day(now)) {
      s.midnight_cycle_done_for_date = local_day(now);
      if (!present) {
        for (const auto& lamp : lamps_) {
          switch (lamp.tier) {
            case LampTier::Ceiling:
              b.turn_on(lamp.id, policy_.ceiling_cycle, CommandReason::MidnightCycle);
              break;
            case LampTier::Desk: start_desk(lamp, CommandReason::MidnightCycle); break;
            case LampTier::UpperRoom:
              b.turn_on(lamp.id, policy_.upper_room_cycle, CommandReason::MidnightCycle);
              break;
          }
        }
        s.midnight_cycle_active = true;
        s.post_departure_cycle_done = true;
      }
    }

    if (!present && s.last_room_vacated_at && !s.post_departure_cycle_done &&
        now - *s.last_room_vacated_at >= policy_.vacancy_grace) {
      for (const auto& lamp : lamps_) {
        if (lamp.tier == LampTier::Ceiling)
          b.turn_on(lamp.id, policy_.ceiling_cycle, CommandReason::CycleStart);
        else if (lamp.tier == LampTier::Desk)
          start_desk(lamp, CommandReason::CycleStart);
      }
      s.post_departure_cycle_done = true;
    }

    for (const auto& lamp : lamps_) {
      if (lamp.tier != LampTier::Desk || desk_blocked[lamp.id]) continue;
      const auto& since = s.desk_clear_since[lamp.id];
      if (!s.desk_cycle_done[lamp.id] && since && now - *since >= policy_.desk_quiet_gap)
        start_desk(lamp, CommandReason::CycleStart);
    }

    const double local = local_seconds(now);
    const auto slot = static_cast<std::int64_t>(std::floor(local / policy_.upper_room_period));
    const double slot_start = static_cast<double>(slot) * policy_.upper_room_period;
    if (s.last_upper_room_slot != slot && local - slot_start < policy_.upper_room_cycle) {
      for (const auto& lamp : lamps_) {
        if (lamp.tier != LampTier::UpperRoom) continue;
        b.turn_on(lamp.id, slot_start + policy_.upper_room_cycle - local,
                  CommandReason::HourlySchedule);
      }
      s.last_upper_room_slot = slot;
    }
  }

  if (s.midnight_cycle_active) {
    bool any = false;
    for (const auto& [id, run] : s.lamps) {
      any = any || (run.running && run.started_by == CommandReason::MidnightCycle);
    }
    if (!any) {
      s.midnight_cycle_active = false;
      if (!present) s.armed = false;
    }
  }

  return std::move(b).finish();
}

ReplayResult Controller::replay(const ControllerState& initial,
                                std::span<const OccupancySnapshot> snapshots) const {
  ReplayResult out{initial, {}};
  std::optional<double> prev;
  for (const auto& snap : snapshots) {
    if (prev && snap.timestamp < *prev) {
      throw OrderingError(
          fmt::format("snapshot at t={} follows t={}", snap.timestamp, *prev));
    }
    prev = snap.timestamp;
    auto r = step(out.final_state, snap, snap.timestamp);
    out.final_state = std::move(r.state);
    out.log.insert(out.log.end(), r.commands.begin(), r.commands.end());
  }
  return out;
}

void write_command_log(std::ostream& out, std::span<const LampCommand> commands) {
  out << "timestamp_s,lamp_id,action,reason\n";
  for (const auto& c : commands) {
    fmt::print(out, "{:.6f},{},{},{}\n", c.timestamp, csv::quote(c.lamp_id),
               to_string(c.action), to_string(c.reason));
  }
}

std::vector<LampCommand> read_command_log(std::istream& in) {
  std::vector<LampCommand> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("timestamp_s", 0) == 0)) continue;
    const auto cols = csv::split(line);
    if (cols.size() != 4)
      throw std::runtime_error(fmt::format("command log line {}: expected 4 columns", line_no));
    const auto ts = csv::parse_double(cols[0]);
    const auto action = parse_lamp_action(cols[2]);
    const auto reason = parse_command_reason(cols[3]);
    if (!ts || !action || !reason)
      throw std::runtime_error(fmt::format("command log line {}: malformed row", line_no));
    out.push_back({*ts, cols[1], *action, *reason});
  }
  return out;
}

}  // namespace uvc
