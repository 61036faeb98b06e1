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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rewardroute/scenario.hpp"

using namespace rewardroute;

namespace
{

// Point to rectangle distance through the clamped nearest point.
double bruteDistance(const Rect & r, const Point2 & p)
{
  if (p.x() >= r.x && p.x() <= r.x + r.w && p.y() >= r.y && p.y() <= r.y + r.h) {
    return 0.0;
  }
  const double cx = std::clamp(p.x(), r.x, r.x + r.w);
  const double cy = std::clamp(p.y(), r.y, r.y + r.h);
  return std::hypot(p.x() - cx, p.y() - cy);
}

const char * kMinimal = R"({
  "bounds": {"x_min": 0, "x_max": 3, "y_min": 0, "y_max": 5},
  "waypoints": [{"x": 0.5, "y": 0.5}],
  "constraints": {"v_max": 1.0},
  "model": "diffdrive"
})";

}  // namespace

TEST_CASE("load minimal scenario")
{
  const Scenario s = loadScenario(kMinimal);
  CHECK(s.environment.obstacles.empty());
  CHECK(s.waypoints.size() == 1);
  CHECK_FALSE(s.constraints.t_max.has_value());
  CHECK_FALSE(s.constraints.d_max.has_value());
  CHECK(s.grid_resolution == 0.05);
  CHECK(s.inflation_radius == 0.0);
  CHECK_FALSE(s.fixed_end);
  CHECK(s.model == RobotModel::DifferentialDrive);
}

TEST_CASE("load rejects malformed documents")
{
  CHECK_THROWS_AS(loadScenario("{\"bounds\": "), ScenarioParseError);
  CHECK_THROWS_AS(loadScenario(R"({"bounds": {"x_min": 0, "x_max": 3, "y_min": 0, "y_max": 5},
    "waypoints": [{"x": 0.5, "y": 0.5}], "colour": 1})"),
                  ScenarioParseError);
  try {
    loadScenario(R"({"bounds": {"x_min": 0, "x_max": 3, "y_min": 0, "y_max": 5},
      "waypoints": [{"x": 0.5, "y": 0.5}, {"x": "a", "y": 1}]})");
    FAIL("expected a parse error");
  } catch (const ScenarioParseError & e) {
    CHECK(std::string(e.what()).find("waypoints[1].x") != std::string::npos);
  }
  try {
    loadScenario("{\n  \"bounds\": [1,,]\n}");
    FAIL("expected a parse error");
  } catch (const ScenarioParseError & e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("load rejects a waypoint inside an obstacle")
{
  const char * doc = R"({
    "bounds": {"x_min": 0, "x_max": 3, "y_min": 0, "y_max": 5},
    "obstacles": [{"x": 1, "y": 1, "w": 1, "h": 1}],
    "waypoints": [{"x": 0.5, "y": 0.5}, {"x": 1.5, "y": 1.5, "reward": 2}],
    "constraints": {"v_max": 1.0}
  })";
  try {
    loadScenario(doc);
    FAIL("expected a validation error");
  } catch (const ScenarioValidationError & e) {
    CHECK(std::string(e.what()).find("waypoint 1") != std::string::npos);
  }
}

TEST_CASE("save and load round trip")
{
  Scenario s;
  s.environment = {0, 10, 0, 10, {Rect{2, 2, 1, 3}, Rect{6, 1, 2, 2}}};
  s.waypoints = {{Point2(0.5, 0.5), 0.0}, {Point2(4.25, 7.125), 3.5}, {Point2(9.5, 9.5), 0.0}};
  s.fixed_end = true;
  s.constraints.t_max = 40.0;
  s.constraints.omega_max = 0.7;
  s.constraints.v_min = 0.1;
  s.model = RobotModel::Quadruped;
  s.model_params = DiffDriveParams{0.05, 0.3};
  s.grid_resolution = 0.1;
  s.inflation_radius = 0.15;
  const Scenario back = loadScenario(saveScenario(s));
  CHECK(back == s);
  CHECK(scenarioDigest(back) == scenarioDigest(s));
}

TEST_CASE("rasterize")
{
  SUBCASE("no obstacles")
  {
    const OccupancyGrid g = rasterize(Environment{0, 3, 0, 5, {}}, 0.05, 0.0);
    CHECK(g.width() == 60);
    CHECK(g.height() == 100);
    CHECK(g.occupiedCount() == 0);
  }
  SUBCASE("obstacle covering everything")
  {
    const OccupancyGrid g = rasterize(Environment{0, 3, 0, 5, {Rect{0, 0, 3, 5}}}, 0.1, 0.0);
    CHECK(g.occupiedCount() == static_cast<std::size_t>(g.width() * g.height()));
  }
  SUBCASE("inflated square matches the distance oracle cell by cell")
  {
    const Rect r{2, 2, 1, 1};
    const OccupancyGrid g = rasterize(Environment{0, 5, 0, 5, {r}}, 0.1, 0.5);
    for (int j = 0; j < g.height(); ++j) {
      for (int i = 0; i < g.width(); ++i) {
        CHECK(g.occupied(i, j) == (bruteDistance(r, g.cellCenter(i, j)) <= 0.5));
      }
    }
  }
  SUBCASE("monotone in inflation")
  {
    const Environment env{0, 4, 0, 4, {Rect{1, 1, 0.7, 0.3}, Rect{2.5, 2.2, 0.4, 1.1}}};
    const OccupancyGrid small = rasterize(env, 0.05, 0.1);
    const OccupancyGrid large = rasterize(env, 0.05, 0.3);
    for (int j = 0; j < small.height(); ++j) {
      for (int i = 0; i < small.width(); ++i) {
        if (!large.occupied(i, j)) {
          CHECK_FALSE(small.occupied(i, j));
        }
      }
    }
  }
}

TEST_CASE("isFree")
{
  const Environment env{0, 4, 0, 4, {Rect{1, 1, 1, 1}}};
  const OccupancyGrid g = rasterize(env, 0.1, 0.0);
  CHECK_FALSE(isFree(g, {-0.1, 2.0}));
  CHECK_FALSE(isFree(g, {2.0, 4.5}));
  CHECK(isFree(g, {0.05, 0.05}));
  // Boundary points belong to the higher-index cell.
  CHECK(g.cellOf({0.2, 0.3}) == Eigen::Vector2i(2, 3));
  CHECK(g.cellOf({0.0, 0.0}) == Eigen::Vector2i(0, 0));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  const double margin = std::sqrt(2.0) * 0.1;
  for (int k = 0; k < 2000; ++k) {
    const Point2 p(u(rng), u(rng));
    const double d = bruteDistance(env.obstacles[0], p);
    const bool inside = d == 0.0;
    const double edge = inside ? std::min({p.x() - 1, 2 - p.x(), p.y() - 1, 2 - p.y()}) : d;
    if (edge >= margin) {
      CHECK(isFree(g, p) == !inside);
    }
  }
}

TEST_CASE("validate")
{
  Scenario s;
  s.environment = {0, 4, 0, 4, {Rect{1, 1, 1, 1}}};
  s.waypoints = {{Point2(0.5, 0.5), 0.0}, {Point2(3.0, 3.0), 1.0}};
  CHECK(validate(s).empty());

  Scenario blocked = s;
  blocked.inflation_radius = 0.8;
  auto findings = validate(blocked);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].find("waypoint 0") != std::string::npos);

  Scenario band = s;
  band.constraints.v_min = 2.0;
  findings = validate(band);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].find("constraints") != std::string::npos);

  Scenario zero = s;
  zero.waypoints[1].reward = 0.0;
  CHECK(validate(zero).size() == 1);
}

TEST_CASE("intermediate indices")
{
  Scenario s;
  s.waypoints.resize(4);
  CHECK(s.intermediateIndices() == std::vector<std::size_t>{1, 2, 3});
  s.fixed_end = true;
  CHECK(s.intermediateIndices() == std::vector<std::size_t>{1, 2});
  CHECK(s.endIndex() == 3u);
  CHECK_FALSE(s.isIntermediate(0));
  CHECK_FALSE(s.isIntermediate(3));
}
