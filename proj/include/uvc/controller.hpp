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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uvc/fusion.hpp"
#include "uvc/room.hpp"

namespace uvc {

/// Cycle lengths and timing knobs, all in seconds.
struct CyclePolicy {
  double ceiling_cycle = 600.0;
  double desk_cycle = 300.0;
  double upper_room_cycle = 300.0;
  double upper_room_period = 3600.0;
  double vacancy_grace = 60.0;
  double desk_quiet_gap = 60.0;
  double reaction_deadline = 1.0;
  /// Local time = UTC + tz_offset; decides when midnight falls.
  double tz_offset = 0.0;
  /// Ignores every occupancy input. Exists only so tests can prove the
  /// safety audit catches a broken interlock; never set it in a deployment.
  bool test_only_bypass_interlock = false;

  friend bool operator==(const CyclePolicy&, const CyclePolicy&) = default;
};

std::vector<Violation> validate(const CyclePolicy& policy);

enum class LampAction { TurnOn, TurnOff };

enum class CommandReason {
  CycleStart,
  CycleComplete,
  OccupancyInterrupt,
  ApproachInterrupt,
  ManualKill,
  MidnightCycle,
  HourlySchedule,
};

std::string_view to_string(LampAction action);
std::string_view to_string(CommandReason reason);
std::optional<LampAction> parse_lamp_action(std::string_view text);
std::optional<CommandReason> parse_command_reason(std::string_view text);

struct LampCommand {
  double timestamp = 0.0;
  std::string lamp_id;
  LampAction action = LampAction::TurnOff;
  CommandReason reason = CommandReason::CycleComplete;

  friend bool operator==(const LampCommand&, const LampCommand&) = default;
};

struct LampRun {
  bool running = false;
  double started_at = 0.0;
  double ends_at = 0.0;
  CommandReason started_by = CommandReason::CycleStart;

  friend bool operator==(const LampRun&, const LampRun&) = default;
};

struct ControllerState {
  bool armed = true;
  bool manual_killed = false;
  std::map<std::string, LampRun> lamps;
  std::optional<double> last_room_vacated_at;
  bool post_departure_cycle_done = false;
  /// Local calendar day (days since 1970-01-01) of the last midnight cycle.
  std::optional<std::int64_t> midnight_cycle_done_for_date;

  // Bookkeeping carried between steps.
  bool was_present = true;
  bool midnight_cycle_active = false;
  std::map<std::string, std::optional<double>> desk_clear_since;
  std::map<std::string, bool> desk_cycle_done;
  std::optional<std::int64_t> last_upper_room_slot;
  std::optional<double> last_step;

  bool is_running(const std::string& lamp_id) const {
    auto it = lamps.find(lamp_id);
    return it != lamps.end() && it->second.running;
  }

  friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

struct StepResult {
  ControllerState state;
  std::vector<LampCommand> commands;
};

struct ReplayResult {
  ControllerState final_state;
  std::vector<LampCommand> log;
};

/// The interlock and scheduler. `step` is a pure transition: no clock, no
/// I/O, all time flows through `now`.
///
/// Per step, in order: cycles that reached their end are switched off; a
/// manual kill switches everything off and disarms; occupancy or a BLE
/// approach switches ceiling lamps off, room motion or desk-zone occupancy
/// switches that desk's lamp off; then, if armed, the midnight cycle, the
/// post-departure cycle, quiet-desk cycles and the hourly upper-room slot
/// are started as due. Starts are only ever issued for lamps whose
/// interlock conditions are clear in the same snapshot.
class Controller {
 public:
  /// `epoch_at_zero` is the UTC Unix time corresponding to now == 0.
  Controller(const RoomModel& room, CyclePolicy policy, double epoch_at_zero = 0.0);

  /// All lamps off, armed, and treated as if the room had just been occupied,
  /// so the first vacant snapshot opens a vacancy episode.
  ControllerState initial_state() const;

  StepResult step(const ControllerState& state, const OccupancySnapshot& snapshot,
                  double now) const;

  /// Steps through `snapshots` using each snapshot's timestamp as `now`.
  /// Throws OrderingError if timestamps decrease.
  ReplayResult replay(const ControllerState& initial,
                      std::span<const OccupancySnapshot> snapshots) const;

  const CyclePolicy& policy() const { return policy_; }
  const std::vector<LampSpec>& lamps() const { return lamps_; }

  /// Local calendar day index for `now`.
  std::int64_t local_day(double now) const;

 private:
  double local_seconds(double now) const;

  std::vector<LampSpec> lamps_;
  CyclePolicy policy_;
  double epoch_at_zero_;
};

/// `timestamp_s,lamp_id,action,reason`
void write_command_log(std::ostream& out, std::span<const LampCommand> commands);
std::vector<LampCommand> read_command_log(std::istream& in);

}  // namespace uvc
