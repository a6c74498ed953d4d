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

#include <optional>
#include <set>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "uvc/config.hpp"
#include "uvc/geometry.hpp"

namespace uvc::detail {

/// Typed, path-tracking access to one JSON object. `finish()` rejects keys
/// that were never read.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const nlohmann::json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(child_path(key), "required field is missing");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number()) throw ConfigError(child_path(key), "expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : (used_.insert(key), fallback);
  }

  std::string string(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_string()) throw ConfigError(child_path(key), "expected a string");
    return v.get<std::string>();
  }

  std::string string_or(const std::string& key, std::string fallback) {
    return has(key) ? string(key) : (used_.insert(key), std::move(fallback));
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(child_path(key), "expected true or false");
    return v.get<bool>();
  }

  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_number_unsigned()) throw ConfigError(child_path(key), "expected an unsigned integer");
    return v.get<std::uint64_t>();
  }

  Point3 point(const std::string& key) {
    const auto& v = raw(key);
    const auto path = child_path(key);
    if (!v.is_array() || v.size() != 3)
      throw ConfigError(path, "expected [x, y, z]");
    Point3 p;
    double* dst[] = {&p.x, &p.y, &p.z};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!v[i].is_number()) throw ConfigError(fmt::format("{}[{}]", path, i), "expected a number");
      *dst[i] = v[i].get<double>();
    }
    return p;
  }

  const nlohmann::json& array(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array()) throw ConfigError(child_path(key), "expected an array");
    return v;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (used_.count(key) == 0) throw ConfigError(child_path(key), "unknown key");
    }
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> used_;
};

inline nlohmann::json point_json(const Point3& p) { return nlohmann::json::array({p.x, p.y, p.z}); }

}  // namespace uvc::detail
