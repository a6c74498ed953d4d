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

#include <cmath>

namespace uvc {

/// Position or direction in the room frame, meters. Origin at a floor
/// corner, x across the width, y along the length, z up.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;

  Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Point3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double dot(const Point3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm_squared() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_squared()); }

  bool is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }

  Point3 normalized() const {
    const double n = norm();
    return n > 0.0 ? Point3{x / n, y / n, z / n} : Point3{};
  }
};

inline double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

inline double horizontal_distance(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline Point3 lerp(const Point3& a, const Point3& b, double f) {
  return a + (b - a) * f;
}

/// Angle in degrees between the ray origin->target and `aim`. `aim` need not
/// be unit length. Returns 0 when target coincides with origin.
inline double angle_off_axis_deg(const Point3& origin, const Point3& aim,
                                 const Point3& target) {
  const Point3 d = target - origin;
  const double dn = d.norm();
  const double an = aim.norm();
  if (dn == 0.0 || an == 0.0) return 0.0;
  double c = d.dot(aim) / (dn * an);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c) * 180.0 / M_PI;
}

}  // namespace uvc
