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

// Reference computations for tests, written without the library's dosimetry
// code so that agreement means something.

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "uvc/dosimetry.hpp"
#include "uvc/room.hpp"

namespace oracle {

inline double irradiance(const uvc::LampSpec& l, const uvc::Point3& p) {
  if (!l.emits_downward) return 0.0;
  const double dx = p.x - l.position.x, dy = p.y - l.position.y, dz = p.z - l.position.z;
  const double r2 = dx * dx + dy * dy + dz * dz;
  const double r = std::sqrt(r2);
  const double cos_incidence = -dz / r;
  if (cos_incidence <= 0.0) return 0.0;
  const double off_axis = std::acos(std::min(1.0, cos_incidence)) * 180.0 / std::numbers::pi;
  if (off_axis > l.beam_half_angle) return 0.0;
  return l.electrical_power * l.uvc_efficiency / (4.0 * std::numbers::pi * r2) * cos_incidence;
}

struct Config {
  std::vector<uvc::LampSpec> lamps;
  uvc::LampOnIntervals intervals;
  double horizon = 0.0;
};

/// Random lamps above a 4 x 5 x 3 m floor with millisecond-aligned,
/// non-overlapping on intervals.
inline Config random_config(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto ms = [](double t) { return std::round(t * 1000.0) / 1000.0; };
  Config c;
  c.horizon = 600.0;
  const int n = 1 + static_cast<int>(uni(0, 4));
  for (int i = 0; i < n; ++i) {
    uvc::LampSpec l;
    l.id = "lamp-" + std::to_string(i);
    l.tier = i == 0 ? uvc::LampTier::Ceiling : uvc::LampTier::Desk;
    l.position = {uni(0.2, 3.8), uni(0.2, 4.8), uni(1.0, 3.0)};
    l.electrical_power = uni(5, 60);
    l.uvc_efficiency = uni(0.1, 1.0);
    l.beam_half_angle = uni(30, 90);
    c.lamps.push_back(l);
    double t = ms(uni(0, 60));
    while (t < c.horizon) {
      const double end = std::min(c.horizon, ms(t + uni(1, 200)));
      if (end > t) c.intervals[l.id].push_back({t, end});
      t = ms(end + uni(1, 120));
    }
  }
  return c;
}

/// Midpoint rule on a fixed step over [0, horizon]; each step sums the
/// irradiance of the lamps lit at its midpoint.
inline std::vector<double> quadrature_dose(const Config& c, const std::vector<uvc::Point3>& pts,
                                           double step = 1e-3) {
  std::vector<std::vector<double>> e(c.lamps.size(), std::vector<double>(pts.size()));
  for (std::size_t l = 0; l < c.lamps.size(); ++l)
    for (std::size_t k = 0; k < pts.size(); ++k) e[l][k] = irradiance(c.lamps[l], pts[k]);

  std::vector<double> dose(pts.size(), 0.0);
  std::vector<std::size_t> cursor(c.lamps.size(), 0);
  const auto steps = static_cast<long>(std::llround(c.horizon / step));
  std::vector<double> lit(pts.size());
  for (long i = 0; i < steps; ++i) {
    const double mid = (static_cast<double>(i) + 0.5) * step;
    std::fill(lit.begin(), lit.end(), 0.0);
    for (std::size_t l = 0; l < c.lamps.size(); ++l) {
      auto it = c.intervals.find(c.lamps[l].id);
      if (it == c.intervals.end()) continue;
      const auto& iv = it->second;
      auto& j = cursor[l];
      while (j < iv.size() && iv[j].end <= mid) ++j;
      if (j < iv.size() && iv[j].start <= mid)
        for (std::size_t k = 0; k < pts.size(); ++k) lit[k] += e[l][k];
    }
    for (std::size_t k = 0; k < pts.size(); ++k) dose[k] += lit[k] * step;
  }
  return dose;
}

}  // namespace oracle
