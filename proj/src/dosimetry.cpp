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

#include "uvc/dosimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace uvc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.9g}", v);
}
}  // namespace

double lamp_irradiance(const LampSpec& lamp, const Point3& point) {
  const Point3 d = lamp.position - point;
  const double r2 = d.norm_squared();
  const double r = std::sqrt(r2);
  if (r < kMinSourceDistance) {
    throw DegenerateDistanceError(fmt::format(
        "point ({}, {}, {}) is within {} m of lamp '{}'", point.x, point.y, point.z,
        kMinSourceDistance, lamp.id));
  }
  if (!lamp.emits_downward) return 0.0;
  const double cos_incidence = d.z / r;
  if (cos_incidence <= 0.0) return 0.0;
  if (lamp.beam_half_angle < 90.0 &&
      cos_incidence < std::cos(lamp.beam_half_angle * M_PI / 180.0)) {
    return 0.0;
  }
  return lamp.uvc_power() / (4.0 * M_PI * r2) * cos_incidence;
}

double irradiance_at_point(std::span<const LampSpec> lamps_on, const Point3& point) {
  double total = 0.0;
  for (const auto& lamp : lamps_on) total += lamp_irradiance(lamp, point);
  return total;
}

double time_to_dose(double irradiance, double target) {
  if (!(irradiance >= 0.0) || !(target >= 0.0))
    throw std::invalid_argument("irradiance and target must be non-negative");
  if (target == 0.0) return 0.0;
  if (irradiance == 0.0) return kInf;
  return target / irradiance;
}

double inactivation_fraction(double dose, double d90_dose) {
  if (!(dose >= 0.0)) throw std::invalid_argument("dose must be >= 0");
  if (!(d90_dose > 0.0)) throw std::invalid_argument("d90 dose must be > 0");
  return 1.0 - std::pow(10.0, -dose / d90_dose);
}

DoseGrid make_floor_grid(const RoomModel& room, int rows, int cols, double plane_height,
                         double target_dose) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("grid needs rows, cols > 0");
  DoseGrid g;
  g.rows = rows;
  g.cols = cols;
  g.plane_height = plane_height;
  g.target_dose = target_dose;
  const double dx = room.width / cols;
  const double dy = room.length / rows;
  g.cell_centers.reserve(static_cast<std::size_t>(rows * cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      g.cell_centers.push_back({(c + 0.5) * dx, (r + 0.5) * dy, plane_height});
    }
  }
  g.accumulated_dose.assign(g.cell_centers.size(), 0.0);
  return g;
}

void check_intervals(const LampOnIntervals& intervals) {
  for (const auto& [lamp_id, list] : intervals) {
    std::vector<OnInterval> sorted = list;
    std::sort(sorted.begin(), sorted.end(),
              [](const OnInterval& a, const OnInterval& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (!std::isfinite(sorted[i].start) || !std::isfinite(sorted[i].end) ||
          sorted[i].end < sorted[i].start) {
        throw std::invalid_argument(
            fmt::format("lamp '{}': interval [{}, {}) is reversed or non-finite", lamp_id,
                        sorted[i].start, sorted[i].end));
      }
      if (i > 0 && sorted[i].start < sorted[i - 1].end) {
        throw std::invalid_argument(
            fmt::format("lamp '{}': intervals overlap at t={}", lamp_id, sorted[i].start));
      }
    }
  }
}

DoseGrid accumulate_dose(DoseGrid grid, std::span<const LampSpec> lamps,
                         const LampOnIntervals& intervals) {
  check_intervals(intervals);
  for (const auto& [lamp_id, list] : intervals) {
    auto it = std::find_if(lamps.begin(), lamps.end(),
                           [&](const LampSpec& l) { return l.id == lamp_id; });
    if (it == lamps.end())
      throw std::invalid_argument(fmt::format("no lamp with id '{}'", lamp_id));
    double on_time = 0.0;
    for (const auto& iv : list) on_time += iv.duration();
    if (on_time == 0.0) continue;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.accumulated_dose[i] += lamp_irradiance(*it, grid.cell_centers[i]) * on_time;
    }
  }
  return grid;
}

CoverageReport coverage_report(const DoseGrid& grid, double cycle_seconds,
                               std::span<const LampSpec> lamps) {
  if (!(cycle_seconds > 0.0)) throw std::invalid_argument("cycle_seconds must be > 0");
  CoverageReport rep;
  rep.target_dose = grid.target_dose;
  rep.cycle_seconds = cycle_seconds;
  rep.cells.reserve(grid.size());

  double max_t = 0.0;
  double min_t = kInf;
  double sum_t = 0.0;
  std::size_t covered = 0;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      CellCoverage cell;
      cell.row = r;
      cell.col = c;
      cell.center = grid.cell_centers[grid.index(r, c)];
      cell.irradiance = irradiance_at_point(lamps, cell.center);
      cell.time_to_target = time_to_dose(cell.irradiance, grid.target_dose);
      if (grid.target_dose > 0.0) {
        cell.log_reduction = cell.irradiance * cycle_seconds / grid.target_dose;
      } else {
        cell.log_reduction = cell.irradiance > 0.0 ? kInf : 0.0;
      }
      max_t = std::max(max_t, cell.time_to_target);
      min_t = std::min(min_t, cell.time_to_target);
      sum_t += cell.time_to_target;
      if (cell.time_to_target <= cycle_seconds) ++covered;
      rep.cells.push_back(cell);
    }
  }
  const auto n = static_cast<double>(rep.cells.size());
  rep.max_time = max_t;
  rep.min_time = min_t;
  rep.mean_time = sum_t / n;
  rep.covered_fraction = static_cast<double>(covered) / n;
  return rep;
}

double minimal_uniform_efficiency(const DoseGrid& grid, std::span<const LampSpec> lamps,
                                  double time_bound) {
  if (!(time_bound > 0.0)) throw std::invalid_argument("time bound must be > 0");
  std::vector<LampSpec> unit(lamps.begin(), lamps.end());
  for (auto& l : unit) l.uvc_efficiency = 1.0;
  const auto rep = coverage_report(grid, time_bound, unit);
  return rep.max_time / time_bound;
}

void write_dose_map_csv(std::ostream& out, const CoverageReport& report) {
  out << "row,col,x_m,y_m,irradiance_w_m2,time_to_target_s,log_reduction\n";
  for (const auto& c : report.cells) {
    fmt::print(out, "{},{},{},{},{},{},{}\n", c.row, c.col, format_value(c.center.x),
               format_value(c.center.y), format_value(c.irradiance),
               format_value(c.time_to_target), format_value(c.log_reduction));
  }
}

}  // namespace uvc
