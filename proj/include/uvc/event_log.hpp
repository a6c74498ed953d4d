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

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uvc/fusion.hpp"

namespace uvc {

class EventLogError : public std::runtime_error {
 public:
  EventLogError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct EventLogWarning {
  std::size_t line = 0;
  std::string message;
};

struct ParsedEventLog {
  std::vector<SensorEvent> events;
  std::vector<EventLogWarning> warnings;
};

/// Kind column value for a payload: PIR, US, BLE, MANUAL_OFF, MANUAL_REARM,
/// or GARBLED.
std::string_view event_kind(const SensorPayload& payload);

/// Reads `timestamp_s,source,kind,arg1,arg2`. Rows whose timestamp cannot be
/// parsed are errors; rows with an unknown kind or malformed arguments become
/// GarbledPayload events and are reported as warnings.
ParsedEventLog read_event_log(std::istream& in);

void write_event_log_header(std::ostream& out);
void write_event_row(std::ostream& out, const SensorEvent& event);
void write_event_log(std::ostream& out, const std::vector<SensorEvent>& events);

}  // namespace uvc
