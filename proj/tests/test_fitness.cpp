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

#include <cmath>
#include <random>

#include "rewardroute/fitness.hpp"

using namespace rewardroute;

namespace
{

Scenario openField()
{
  Scenario s;
  s.environment = {0, 5, 0, 5, {}};
  s.waypoints = {{Point2(0.5, 0.5), 0.0}, {Point2(4.5, 0.5), 2.0}, {Point2(4.5, 4.5), 3.0}, {Point2(0.5, 4.5), 1.0}};
  s.constraints.v_max = 1.0;
  s.grid_resolution = 0.1;
  return s;
}

}  // namespace

TEST_CASE("time and distance violations")
{
  CHECK(violationTime(30, 40.0) == 0.0);
  CHECK(violationTime(40, 40.0) == 0.0);
  CHECK(violationTime(60, 40.0) == 0.5);
  CHECK(violationTime(60, std::nullopt) == 0.0);
  CHECK(violationDistance(7.5, 8.0) == 0.0);
  CHECK(violationDistance(8.5, 8.0) == 0.0625);
  CHECK(violationDistance(16, 8.0) == 1.0);
  CHECK(violationDistance(16, std::nullopt) == 0.0);
}

TEST_CASE("input violation")
{
  const std::size_t n = 101;
  std::vector<double> t(n);
  std::vector<double> same(n, 0.5);
  std::vector<double> twice(n, 1.0);
  std::vector<double> half(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = 0.1 * i;
    half[i] = t[i] < 5.0 ? 1.0 : 0.5;
  }
  CHECK(violationInput(t, same, 0.5, 10.0) == 0.0);
  CHECK(std::abs(violationInput(t, twice, 0.5, 10.0) - 1.0) < 1e-12);
  CHECK(std::abs(violationInput(t, half, 0.5, 10.0) - 0.5) <= 0.1 / 10.0);
  CHECK(std::abs(violationBelow(t, same, 1.0, 10.0) - 0.5) < 1e-12);
}

TEST_CASE("obstacle violation")
{
  const OccupancyGrid grid = rasterize(Environment{0, 10, 0, 2, {Rect{5.0, 0.0, 5.0, 2.0}}}, 0.05, 0.0);
  const std::vector<Point2> line = {{0.5, 1.0}, {9.5, 1.0}};
  ConstraintSet c;
  c.t_max = 9.0;
  const Trajectory t = parameterizeTime(buildPath(line), c, 361);
  const double increment = 9.0 / 360.0;
  CHECK(std::abs(violationObstacle(t, grid) - 0.5) <= increment / 9.0 + 1e-12);

  const OccupancyGrid open = rasterize(Environment{0, 10, 0, 2, {}}, 0.05, 0.0);
  CHECK(violationObstacle(t, open) == 0.0);
  const OccupancyGrid closed = rasterize(Environment{0, 10, 0, 2, {Rect{0, 0, 10, 2}}}, 0.05, 0.0);
  CHECK(violationObstacle(t, closed) == 1.0);
}

TEST_CASE("full reward with no violations gives h = 1")
{
  FitnessEvaluator eval(openField());
  const WaypointSequence all{0, 1, 2, 3};
  const EvaluatedIndividual e = eval.evaluate(all);
  CHECK(e.report.feasible());
  CHECK(e.h == 1.0);
  CHECK(e.report.reward == 6.0);
  CHECK(e.report.path_length > 12.0);
}

TEST_CASE("empty sequence uses the reward floor")
{
  FitnessEvaluator eval(openField());
  const WaypointSequence none{0};
  const EvaluatedIndividual e = eval.evaluate(none);
  CHECK(e.report.feasible());
  CHECK(e.h == 6.0 / 0.5);
  CHECK(e.report.t_f == 0.0);
}

TEST_CASE("time violation composes with the reward term")
{
  Scenario s = openField();
  s.waypoints.resize(2);
  FitnessEvaluator probe(s);
  const WaypointSequence seq{0, 1};
  const double length = probe.plan(seq).individual.report.path_length;
  // v_max = 1 forces t_f = L; a window of L / 1.2 is overrun by 20 percent.
  s.constraints.t_max = length / 1.2;
  FitnessEvaluator eval(s);
  const EvaluatedIndividual e = eval.evaluate(seq);
  CHECK(std::abs(e.report.time - 0.2) < 1e-12);
  CHECK(std::abs(e.h - 3.0) < 1e-12);
}

TEST_CASE("pipeline failure yields the maximal penalty")
{
  Scenario s = openField();
  s.environment.obstacles = {Rect{3.8, 0.0, 0.2, 5.0}};
  FitnessEvaluator eval(s);
  const WaypointSequence seq{0, 1};
  const EvaluatedIndividual e = eval.evaluate(seq);
  REQUIRE(e.report.failure.has_value());
  CHECK(e.h == 6.0 / 0.5 + PenaltyWeights{}.total());
}

TEST_CASE("no intermediate reward")
{
  Scenario s = openField();
  s.waypoints.resize(1);
  FitnessEvaluator eval(s);
  const WaypointSequence seq{0};
  CHECK(eval.evaluate(seq).h == 1.0);
}

TEST_CASE("angular rate and distance bounds register")
{
  Scenario s = openField();
  s.constraints.omega_max = 0.05;
  s.constraints.d_max = 5.0;
  s.constraints.accel_max = 0.01;
  FitnessEvaluator eval(s);
  const WaypointSequence seq{0, 1, 2};
  const EvaluatedIndividual e = eval.evaluate(seq);
  CHECK(e.report.distance > 0.0);
  bool omega = false;
  bool accel = false;
  for (const auto & c : e.report.channels) {
    omega = omega || (c.name == "omega" && c.value > 0.0);
    accel = accel || (c.name == "accel" && c.value > 0.0);
  }
  CHECK(omega);
  CHECK(accel);
  CHECK(e.h > 1.0 + 10.0 * e.report.distance);
  CHECK(e.h == doctest::Approx(eval.fitness(e.report)));
}

TEST_CASE("memo and pair cache do not change results")
{
  FitnessEvaluator cached(openField());
  FitnessEvaluator plain(openField(), {}, false);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    WaypointSequence seq{1, 2, 3};
    std::shuffle(seq.begin(), seq.end(), rng);
    seq.resize(trial % 4);
    seq.insert(seq.begin(), 0);
    const EvaluatedIndividual a = cached.evaluate(seq);
    const EvaluatedIndividual b = plain.evaluate(seq);
    CHECK(a.h == b.h);
    CHECK(a.report.path_length == b.report.path_length);
    CHECK(a.h >= 1.0);
  }
  CHECK(cached.memoHits() > 0);
}

TEST_CASE("malformed sequences are rejected")
{
  FitnessEvaluator eval(openField());
  const WaypointSequence wrong_start{1, 2};
  const WaypointSequence repeat{0, 1, 1};
  const WaypointSequence range{0, 9};
  CHECK_THROWS_AS(eval.evaluate(wrong_start), std::invalid_argument);
  CHECK_THROWS_AS(eval.evaluate(repeat), std::invalid_argument);
  CHECK_THROWS_AS(eval.evaluate(range), std::invalid_argument);
}
