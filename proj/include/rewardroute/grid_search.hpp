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
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rewardroute/scenario.hpp"

namespace rewardroute
{

/// Piecewise-linear obstacle-free path.
struct GridPath
{
  std::vector<Point2> points;
  double length = 0.0;
  /// Index into points of each sequence waypoint (filled by polylineForSequence).
  std::vector<std::size_t> waypoint_points;
};

double polylineLength(std::span<const Point2> points);

class NoPathError : public std::runtime_error
{
public:
  NoPathError(const std::string & what, std::size_t from = 0, std::size_t to = 0)
  : std::runtime_error(what), from_(from), to_(to)
  {
  }
  std::size_t from() const { return from_; }
  std::size_t to() const { return to_; }

private:
  std::size_t from_;
  std::size_t to_;
};

class InvalidEndpointError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// 8-connected A* without corner cutting. Intermediate points are cell
/// centers; the continuous start and goal are kept at the path ends.
GridPath astar(const OccupancyGrid & grid, const Point2 & start, const Point2 & goal);

/// Memo of pairwise A* results keyed by ordered waypoint-index pairs.
/// Concurrent lookups, serialized inserts.
class PairPathCache
{
public:
  /// Returns nullptr for a cached "no path" result; std::nullopt when absent.
  std::optional<std::shared_ptr<const GridPath>> find(std::size_t from, std::size_t to) const;
  void insert(std::size_t from, std::size_t to, std::shared_ptr<const GridPath> path);
  std::size_t size() const;

private:
  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const GridPath>> entries_;
};

/// Concatenation of pairwise A* paths between consecutive sequence waypoints.
/// Pass cache == nullptr to disable memoization.
GridPath polylineForSequence(
  const OccupancyGrid & grid, std::span<const std::size_t> sequence, const Scenario & scenario,
  PairPathCache * cache = nullptr);

}  // namespace rewardroute
