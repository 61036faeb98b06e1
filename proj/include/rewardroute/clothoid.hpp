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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rewardroute/grid_search.hpp"
#include "rewardroute/scenario.hpp"

namespace rewardroute
{

struct PathPose
{
  Point2 position = Point2::Zero();
  double heading = 0.0;
  double curvature = 0.0;
};

/// Euler spiral: curvature kappa0 + kappa_rate * s for s in [0, length].
struct ClothoidSegment
{
  Point2 start = Point2::Zero();
  double theta0 = 0.0;
  double kappa0 = 0.0;
  double kappa_rate = 0.0;
  double length = 0.0;

  PathPose eval(double s) const;
  /// Pose at s stepped from a pose already known at s_from.
  PathPose advance(const PathPose & from, double s_from, double s) const;
  double headingAt(double s) const { return theta0 + s * (kappa0 + 0.5 * kappa_rate * s); }
  double curvatureAt(double s) const { return kappa0 + kappa_rate * s; }
};

class ClothoidFitError : public std::runtime_error
{
public:
  ClothoidFitError(const std::string & what, double residual, std::size_t pair_index = 0)
  : std::runtime_error(what), residual_(residual), pair_index_(pair_index)
  {
  }
  double residual() const { return residual_; }
  std::size_t pairIndex() const { return pair_index_; }

private:
  double residual_;
  std::size_t pair_index_;
};

/// G1 Hermite interpolation: the clothoid leaving p0 with heading theta0 and
/// arriving at p1 with heading theta1 (modulo 2 pi).
ClothoidSegment fitG1(const Point2 & p0, double theta0, const Point2 & p1, double theta1);

/// Tangent direction for every polyline vertex: bisector of the incoming and
/// outgoing bearings, +pi/2 from the incoming bearing at a reversal.
std::vector<double> assignHeadings(std::span<const Point2> polyline, std::optional<double> initial_heading = std::nullopt);

/// Clothoid spline through a subset of polyline vertices (the knots).
struct PiecewiseClothoid
{
  std::vector<ClothoidSegment> segments;
  /// Polyline index of each knot; segment k joins knots k and k+1.
  std::vector<std::size_t> knot_indices;
  std::vector<Point2> knots;
  std::vector<double> knot_headings;

  double length() const;
  /// Pose at arc length s measured from the path start.
  PathPose sample(double s) const;
};

/// One segment per consecutive point pair.
PiecewiseClothoid buildPath(std::span<const Point2> polyline, std::optional<double> initial_heading = std::nullopt);

/// One segment per consecutive pair of the selected knots, using the
/// per-vertex headings computed on the whole polyline.
PiecewiseClothoid buildPath(
  std::span<const Point2> polyline, std::span<const double> headings, std::span<const std::size_t> knot_indices);

/// Polyline endpoints, direction changes and any extra indices, sorted.
std::vector<std::size_t> cornerKnots(std::span<const Point2> polyline, std::span<const std::size_t> extra = {});

struct RefineResult
{
  PiecewiseClothoid path;
  std::size_t insertions = 0;
};

/// Memo of segmentIsFree keyed by the exact segment parameters; safe to share
/// between threads.
class SegmentFreeCache
{
public:
  bool isFree(const ClothoidSegment & segment, const OccupancyGrid & grid);
  std::size_t size() const;

private:
  using Key = std::array<double, 6>;
  struct KeyHash
  {
    std::size_t operator()(const Key & k) const;
  };

  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, bool, KeyHash> entries_;
};

/// Subdivides every segment that has an occupied sample by inserting the middle
/// polyline vertex of its source interval until all samples are free or the
/// interval cannot be split further.
RefineResult refineCollision(
  const PiecewiseClothoid & path, std::span<const Point2> polyline, const OccupancyGrid & grid,
  SegmentFreeCache * cache = nullptr);

/// True when every sample at spacing <= resolution/2 along the segment is free.
bool segmentIsFree(const ClothoidSegment & segment, const OccupancyGrid & grid);

inline double length(const PiecewiseClothoid & path) { return path.length(); }

struct TrajectorySample
{
  double t = 0.0;
  Point2 position = Point2::Zero();
  double heading = 0.0;
  double curvature = 0.0;
  double speed = 0.0;
  /// Tangential acceleration; zero on constant-speed trajectories.
  double accel = 0.0;

  double lateralAccel() const { return speed * speed * std::abs(curvature); }
};

struct Trajectory
{
  std::vector<TrajectorySample> samples;
  double t_f = 0.0;
  double total_length = 0.0;
  double cruise_speed = 0.0;
  /// Iterations of the minimum-speed time reduction loop.
  int time_reductions = 0;
};

class InfeasibleSpeedBandError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct TimingOptions
{
  /// Cruise speed as a fraction of v_max when no time window is given.
  double cruise_fraction = 0.8;
  /// Final-time shrink factor of the minimum-speed loop.
  double time_reduction = 0.9;
};

/// Constant-speed parameterization with samples uniform in arc length.
Trajectory parameterizeTime(
  const PiecewiseClothoid & path, const ConstraintSet & constraints, std::size_t sample_count,
  const TimingOptions & options = {});

/// Sample count giving arc spacing no larger than resolution/2.
std::size_t defaultSampleCount(double path_length, double resolution);

/// CSV `t,x,y,theta,kappa,v,a_lat`, nine significant digits.
void writeTrajectoryCsv(std::ostream & out, const Trajectory & trajectory);

}  // namespace rewardroute
