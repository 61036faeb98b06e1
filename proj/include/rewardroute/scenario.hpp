// Copyright (c) 2026 The rewardroute Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rewardroute/geometry.hpp"

namespace rewardroute
{

/// Axis-aligned rectangle, lower-left corner plus extent, meters.
struct Rect
{
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  /// Euclidean distance from p to the closed rectangle (0 inside).
  double distanceTo(const Point2 & p) const;
  bool contains(const Point2 & p) const { return distanceTo(p) == 0.0; }

  bool operator==(const Rect &) const = default;
};

struct Environment
{
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  std::vector<Rect> obstacles;

  bool inBounds(const Point2 & p) const
  {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }

  bool operator==(const Environment &) const = default;
};

struct Waypoint
{
  Point2 position = Point2::Zero();
  double reward = 0.0;

  bool operator==(const Waypoint & o) const
  {
    return position == o.position && reward == o.reward;
  }
};

struct ConstraintSet
{
  std::optional<double> t_max;
  std::optional<double> d_max;
  double v_max = 1.0;
  double v_min = 0.0;
  std::optional<double> omega_max;
  std::optional<double> accel_max;

  bool operator==(const ConstraintSet &) const = default;
};

enum class RobotModel
{
  DifferentialDrive,
  Quadruped
};

struct DiffDriveParams
{
  double wheel_radius = 0.0;
  double track_width = 0.0;

  bool operator==(const DiffDriveParams &) const = default;
};

inline constexpr double kDefaultGridResolution = 0.05;

/// The planning problem. Waypoint 0 is the fixed start; when fixed_end is set
/// the last waypoint is the mandatory terminal.
struct Scenario
{
  Environment environment;
  std::vector<Waypoint> waypoints;
  bool fixed_end = false;
  ConstraintSet constraints;
  RobotModel model = RobotModel::DifferentialDrive;
  std::optional<DiffDriveParams> model_params;
  double grid_resolution = kDefaultGridResolution;
  double inflation_radius = 0.0;

  std::size_t startIndex() const { return 0; }
  std::optional<std::size_t> endIndex() const
  {
    if (fixed_end) {
      return waypoints.size() - 1;
    }
    return std::nullopt;
  }
  /// Indices that may appear between the fixed endpoints.
  std::vector<std::size_t> intermediateIndices() const;
  bool isIntermediate(std::size_t index) const;

  bool operator==(const Scenario &) const = default;
};

/// Boolean occupancy raster; cell (i, j) covers
/// [origin + i*res, origin + (i+1)*res) in x and likewise in y.
class OccupancyGrid
{
public:
  OccupancyGrid(Point2 origin, double resolution, int width, int height, std::vector<std::uint8_t> cells);

  const Point2 & origin() const { return origin_; }
  double resolution() const { return resolution_; }
  int width() const { return width_; }
  int height() const { return height_; }

  bool inside(int i, int j) const { return i >= 0 && j >= 0 && i < width_ && j < height_; }
  bool occupied(int i, int j) const { return !inside(i, j) || cells_[index(i, j)] != 0; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width_ + i; }

  /// Floor-to-cell mapping; boundary points belong to the higher-index cell.
  Eigen::Vector2i cellOf(const Point2 & p) const;
  Point2 cellCenter(int i, int j) const;

  std::size_t occupiedCount() const;

private:
  Point2 origin_;
  double resolution_;
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
};

class ScenarioParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class ScenarioValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Cell is occupied iff its center lies within inflation_radius of an obstacle
/// or outside the environment bounds.
OccupancyGrid rasterize(const Environment & env, double resolution, double inflation_radius);

inline OccupancyGrid rasterize(const Scenario & scenario)
{
  return rasterize(scenario.environment, scenario.grid_resolution, scenario.inflation_radius);
}

bool isFree(const OccupancyGrid & grid, const Point2 & p);

/// Every invariant violation of the scenario, as human-readable findings.
std::vector<std::string> validate(const Scenario & scenario);
std::vector<std::string> validate(const Scenario & scenario, const OccupancyGrid & grid);

Scenario loadScenario(std::string_view text);
Scenario loadScenarioFile(const std::string & path);
std::string saveScenario(const Scenario & scenario);

/// Stable 64-bit FNV-1a digest of the canonical serialization, hex encoded.
std::string scenarioDigest(const Scenario & scenario);

}  // namespace rewardroute
