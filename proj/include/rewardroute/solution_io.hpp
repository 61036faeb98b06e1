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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "rewardroute/ga.hpp"

namespace rewardroute
{

/// Planner output as stored in solution.json and oracle.json.
struct SolutionDocument
{
  std::string scenario_digest;
  WaypointSequence sequence;
  double h = 0.0;
  double reward = 0.0;
  double t_f = 0.0;
  double path_length = 0.0;
  ViolationReport violations;
  std::string trajectory_file = "trajectory.csv";
  std::string method = "ga";
  std::optional<GAConfig> config;
  std::optional<std::uint64_t> seed;
};

SolutionDocument makeSolution(const Scenario & scenario, const EvaluatedIndividual & best);

/// Pretty-printed JSON with a fixed key order.
std::string solutionToJson(const SolutionDocument & doc);
SolutionDocument solutionFromJson(std::string_view text);

/// Obstacles as rectangles, waypoints as circles scaled by reward, and the
/// trajectory as a polyline.
void writeSvgPlot(std::ostream & out, const Scenario & scenario, const Trajectory * trajectory);

}  // namespace rewardroute
