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

#include "rewardroute/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <queue>
#include <tuple>

namespace rewardroute
{

double polylineLength(std::span<const Point2> points)
{
  double total = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    total += (points[k] - points[k - 1]).norm();
  }
  return total;
}

namespace
{

constexpr double kSqrt2 = 1.4142135623730951;

struct OpenEntry
{
  double f;
  double h;
  std::size_t cell;

  bool operator>(const OpenEntry & o) const { return std::tie(f, h, cell) > std::tie(o.f, o.h, o.cell); }
};

double octile(int di, int dj, double res)
{
  const int a = std::abs(di);
  const int b = std::abs(dj);
  return res * (std::max(a, b) + (kSqrt2 - 1.0) * std::min(a, b));
}

}  // namespace

GridPath astar(const OccupancyGrid & grid, const Point2 & start, const Point2 & goal)
{
  if (!isFree(grid, start)) {
    throw InvalidEndpointError("astar: start point is not in free space");
  }
  if (!isFree(grid, goal)) {
    throw InvalidEndpointError("astar: goal point is not in free space");
  }

  const Eigen::Vector2i sc = grid.cellOf(start);
  const Eigen::Vector2i gc = grid.cellOf(goal);
  GridPath out;
  if (sc == gc) {
    out.points.push_back(start);
    if (goal != start) {
      out.points.push_back(goal);
    }
    out.length = polylineLength(out.points);
    return out;
  }

  const double res = grid.resolution();
  const int w = grid.width();
  const std::size_t n = static_cast<std::size_t>(w) * grid.height();
  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, n);
  std::vector<std::uint8_t> closed(n, 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;

  const std::size_t s = grid.index(sc.x(), sc.y());
  const std::size_t t = grid.index(gc.x(), gc.y());
  g[s] = 0.0;
  const double h0 = octile(gc.x() - sc.x(), gc.y() - sc.y(), res);
  open.push({h0, h0, s});

  static constexpr int kDi[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDj[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  bool found = false;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.cell]) {
      continue;
    }
    closed[top.cell] = 1;
    if (top.cell == t) {
      found = true;
      break;
    }
    const int ci = static_cast<int>(top.cell % w);
    const int cj = static_cast<int>(top.cell / w);
    for (int k = 0; k < 8; ++k) {
      const int ni = ci + kDi[k];
      const int nj = cj + kDj[k];
      if (grid.occupied(ni, nj)) {
        continue;
      }
      const bool diagonal = kDi[k] != 0 && kDj[k] != 0;
      if (diagonal && (grid.occupied(ci + kDi[k], cj) || grid.occupied(ci, cj + kDj[k]))) {
        continue;
      }
      const std::size_t nb = grid.index(ni, nj);
      if (closed[nb]) {
        continue;
      }
      const double cand = g[top.cell] + (diagonal ? kSqrt2 * res : res);
      if (cand < g[nb]) {
        g[nb] = cand;
        parent[nb] = top.cell;
        const double h = octile(gc.x() - ni, gc.y() - nj, res);
        open.push({cand + h, h, nb});
      }
    }
  }
  if (!found) {
    throw NoPathError("astar: goal is unreachable from start");
  }

  std::vector<std::size_t> cells;
  for (std::size_t c = t; c != s; c = parent[c]) {
    cells.push_back(c);
  }
  cells.push_back(s);
  std::reverse(cells.begin(), cells.end());

  out.points.reserve(cells.size());
  out.points.push_back(start);
  for (std::size_t k = 1; k + 1 < cells.size(); ++k) {
    out.points.push_back(grid.cellCenter(static_cast<int>(cells[k] % w), static_cast<int>(cells[k] / w)));
  }
  out.points.push_back(goal);
  out.length = polylineLength(out.points);
  return out;
}

std::optional<std::shared_ptr<const GridPath>> PairPathCache::find(std::size_t from, std::size_t to) const
{
  std::shared_lock lock(mutex_);
  const auto it = entries_.find({from, to});
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void PairPathCache::insert(std::size_t from, std::size_t to, std::shared_ptr<const GridPath> path)
{
  std::unique_lock lock(mutex_);
  entries_.emplace(std::make_pair(from, to), std::move(path));
}

std::size_t PairPathCache::size() const
{
  std::shared_lock lock(mutex_);
  return entries_.size();
}

GridPath polylineForSequence(
  const OccupancyGrid & grid, std::span<const std::size_t> sequence, const Scenario & scenario, PairPathCache * cache)
{
  GridPath out;
  if (sequence.empty()) {
    return out;
  }
  out.points.push_back(scenario.waypoints.at(sequence[0]).position);
  out.waypoint_points.push_back(0);

  for (std::size_t k = 1; k < sequence.size(); ++k) {
    const std::size_t a = sequence[k - 1];
    const std::size_t b = sequence[k];
    // Pairs are searched in ascending index order and reversed on demand.
    const std::size_t lo = std::min(a, b);
    const std::size_t hi = std::max(a, b);
    std::shared_ptr<const GridPath> pair;
    std::optional<std::shared_ptr<const GridPath>> hit;
    if (cache != nullptr) {
      hit = cache->find(lo, hi);
    }
    if (hit) {
      pair = *hit;
    } else {
      try {
        pair = std::make_shared<const GridPath>(
          astar(grid, scenario.waypoints.at(lo).position, scenario.waypoints.at(hi).position));
      } catch (const NoPathError &) {
        pair = nullptr;
      } catch (const InvalidEndpointError &) {
        pair = nullptr;
      }
      if (cache != nullptr) {
        cache->insert(lo, hi, pair);
      }
    }
    if (!pair) {
      throw NoPathError(
        "no path between waypoint " + std::to_string(a) + " and waypoint " + std::to_string(b), a, b);
    }
    const std::size_t n = pair->points.size();
    for (std::size_t p = 0; p < n; ++p) {
      const Point2 & q = a <= b ? pair->points[p] : pair->points[n - 1 - p];
      if (p == 0 && q == out.points.back()) {
        continue;
      }
      out.points.push_back(q);
    }
    out.length += pair->length;
    out.waypoint_points.push_back(out.points.size() - 1);
  }
  return out;
}

}  // namespace rewardroute
