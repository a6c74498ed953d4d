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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uvc/controller.hpp"
#include "uvc/fusion.hpp"
#include "uvc/room.hpp"

namespace uvc {

/// Malformed input: bad syntax, wrong type, missing or unknown key.
/// `field` is a path such as "lamps[1].uvc_efficiency"; `line` is set for
/// syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message, std::size_t line = 0);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

/// Well-formed input that breaks model invariants.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Throws ValidationError if `violations` is non-empty.
void require_valid(std::vector<Violation> violations);

nlohmann::json parse_json_text(std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

RoomModel room_from_json(const nlohmann::json& j);
nlohmann::json room_to_json(const RoomModel& room);

/// Parses and validates a room config document.
RoomModel load_room(std::string_view config_text);
RoomModel load_room_file(const std::filesystem::path& path);
std::string save_room(const RoomModel& room);

CyclePolicy policy_from_json(const nlohmann::json& j);
nlohmann::json policy_to_json(const CyclePolicy& policy);
CyclePolicy load_policy_file(const std::filesystem::path& path);

FusionParams fusion_from_json(const nlohmann::json& j);
nlohmann::json fusion_to_json(const FusionParams& params);

}  // namespace uvc
