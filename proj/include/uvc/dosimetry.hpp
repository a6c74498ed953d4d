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
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uvc/room.hpp"

namespace uvc {

/// Lamp closer than this to an evaluation point makes the point-source model
/// meaningless.
inline constexpr double kMinSourceDistance = 0.01;  // m

/// Default D90 for SARS-CoV-2 surrogates, the conservative end of 20-27 J/m^2.
inline constexpr double kDefaultD90 = 27.0;  // J/m^2

class DegenerateDistanceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct IrradianceSample {
  Point3 point;
  double irradiance = 0.0;  // W/m^2, horizontal upward-facing surface
};

/// Irradiance from one lamp on an upward-facing horizontal surface at `point`:
/// isotropic point source, inverse-square falloff, cosine incidence, clipped
/// to the fixture's beam cone. Lamps that do not emit downward contribute 0.
double lamp_irradiance(const LampSpec& lamp, const Point3& point);

/// Sum of lamp_irradiance over `lamps_on`. Throws DegenerateDistanceError when
/// `point` is within kMinSourceDistance of any lamp.
double irradiance_at_point(std::span<const LampSpec> lamps_on, const Point3& point);

/// Seconds needed to deliver `target` at constant `irradiance`. Returns
/// +infinity for zero irradiance and 0 for a zero target.
double time_to_dose(double irradiance, double target);

/// Log-linear inactivation: 1 - 10^(-dose/d90).
double inactivation_fraction(double dose, double d90_dose);

struct DoseGrid {
  int rows = 0;
  int cols = 0;
  double plane_height = 0.0;
  std::vector<Point3> cell_centers;      // row-major
  std::vector<double> accumulated_dose;  // J/m^2, row-major
  double target_dose = kDefaultD90;

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(col);
  }
  std::size_t size() const { return accumulated_dose.size(); }
};

/// Rows run along the room length (y), columns across the width (x); cell
/// centers sit in the middle of equal rectangles.
DoseGrid make_floor_grid(const RoomModel& room, int rows = 8, int cols = 6,
                         double plane_height = 0.0, double target_dose = kDefaultD90);

struct OnInterval {
  double start = 0.0;
  double end = 0.0;
  double duration() const { return end - start; }
  friend bool operator==(const OnInterval&, const OnInterval&) = default;
};

/// Per-lamp on periods, keyed by lamp id.
using LampOnIntervals = std::map<std::string, std::vector<OnInterval>>;

/// Throws std::invalid_argument on reversed or overlapping intervals.
void check_intervals(const LampOnIntervals& intervals);

/// Adds the closed-form dose E(cell) x on-duration for every lamp interval.
/// Intervals naming lamps absent from `lamps` are rejected.
DoseGrid accumulate_dose(DoseGrid grid, std::span<const LampSpec> lamps,
                         const LampOnIntervals& intervals);

struct CellCoverage {
  int row = 0;
  int col = 0;
  Point3 center;
  double irradiance = 0.0;      // W/m^2 with every given lamp on
  double time_to_target = 0.0;  // s, +inf when uncovered
  double log_reduction = 0.0;   // log10 reduction achieved in one cycle
};

struct CoverageReport {
  std::vector<CellCoverage> cells;
  double target_dose = 0.0;
  double cycle_seconds = 0.0;
  double max_time = 0.0;
  double min_time = 0.0;
  double mean_time = 0.0;
  double covered_fraction = 0.0;  // cells reaching target within one cycle
};

CoverageReport coverage_report(const DoseGrid& grid, double cycle_seconds,
                               std::span<const LampSpec> lamps);

/// Smallest efficiency which, applied to every lamp, brings the grid's
/// maximum time-to-target down to `time_bound`. Exact because irradiance is
/// linear in radiant power. Returns +inf if some cell receives no light.
double minimal_uniform_efficiency(const DoseGrid& grid, std::span<const LampSpec> lamps,
                                  double time_bound);

/// `row,col,x_m,y_m,irradiance_w_m2,time_to_target_s,log_reduction`
void write_dose_map_csv(std::ostream& out, const CoverageReport& report);

}  // namespace uvc
