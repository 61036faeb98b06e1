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

#include <atomic>
#include <cstddef>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "rewardroute/clothoid.hpp"
#include "rewardroute/flatness.hpp"
#include "rewardroute/grid_search.hpp"
#include "rewardroute/scenario.hpp"

namespace rewardroute
{

using WaypointSequence = std::vector<std::size_t>;

struct PenaltyWeights
{
  double time = 10.0;
  double distance = 10.0;
  double obstacle = 100.0;
  double input = 10.0;
  double state = 10.0;

  double total() const { return time + distance + obstacle + input + state; }
};

enum class ChannelKind
{
  Input,
  State
};

struct ChannelViolation
{
  std::string name;
  ChannelKind kind = ChannelKind::Input;
  double value = 0.0;
};

struct ViolationReport
{
  double time = 0.0;
  double distance = 0.0;
  double obstacle = 0.0;
  std::vector<ChannelViolation> channels;
  double t_f = 0.0;
  double path_length = 0.0;
  double reward = 0.0;
  /// Set when a pipeline stage failed; all violation measures are then 1.
  std::optional<std::string> failure;

  double penalty(const PenaltyWeights & w) const;
  bool feasible() const;
};

struct EvaluatedIndividual
{
  WaypointSequence sequence;
  double h = 0.0;
  ViolationReport report;
};

double violationTime(double t_f, std::optional<double> t_max);
double violationDistance(double d, std::optional<double> d_max);

/// One minus the free fraction of arc length, trapezoidal over the samples.
double violationObstacle(const Trajectory & trajectory, const OccupancyGrid & grid);

/// Integral of the exceedance of |u| over u_bar, normalized by t_f * u_bar.
double violationInput(std::span<const double> t, std::span<const double> magnitude, double u_bar, double t_f);

/// Integral of the shortfall of |u| below u_min, normalized by t_f * u_min.
double violationBelow(std::span<const double> t, std::span<const double> magnitude, double u_min, double t_f);

struct FitnessOptions
{
  PenaltyWeights weights;
  TimingOptions timing;
  bool standard_body_twist = false;
  /// Zero selects defaultSampleCount.
  std::size_t sample_count = 0;
};

/// Everything the pipeline produces for one sequence.
struct PlanResult
{
  EvaluatedIndividual individual;
  GridPath polyline;
  PiecewiseClothoid path;
  Trajectory trajectory;
  StateInputTrace states;
  std::size_t refinements = 0;
};

/// Shared state for repeated evaluations on one scenario: the rasterized grid,
/// pairwise A* paths and a sequence memo. Safe for concurrent evaluate calls.
class FitnessEvaluator
{
public:
  explicit FitnessEvaluator(Scenario scenario, FitnessOptions options = {}, bool memoize = true);

  EvaluatedIndividual evaluate(std::span<const std::size_t> sequence);
  PlanResult plan(std::span<const std::size_t> sequence);

  const Scenario & scenario() const { return scenario_; }
  const OccupancyGrid & grid() const { return grid_; }
  const FitnessOptions & options() const { return options_; }
  PairPathCache & pairCache() { return pairs_; }

  double rewardMax() const { return reward_max_; }
  double rewardEpsilon() const { return reward_epsilon_; }
  /// g_max / max(g, eps), or 1 when there is no intermediate reward.
  double rewardTerm(double reward) const;
  double fitness(const ViolationReport & report) const
  {
    return rewardTerm(report.failure ? 0.0 : report.reward) + report.penalty(options_.weights);
  }

  std::size_t evaluations() const { return evaluations_.load(); }
  std::size_t memoHits() const { return memo_hits_.load(); }

private:
  void checkSequence(std::span<const std::size_t> sequence) const;

  Scenario scenario_;
  FitnessOptions options_;
  OccupancyGrid grid_;
  PairPathCache pairs_;
  SegmentFreeCache segments_;
  bool memoize_;
  double reward_max_ = 0.0;
  double reward_epsilon_ = 0.0;
  std::size_t intermediate_count_ = 0;

  mutable std::shared_mutex memo_mutex_;
  std::map<WaypointSequence, EvaluatedIndividual> memo_;
  std::atomic<std::size_t> evaluations_{0};
  std::atomic<std::size_t> memo_hits_{0};
};

/// Uncached evaluation; rasterizes the scenario on every call.
EvaluatedIndividual evaluateFitness(
  std::span<const std::size_t> sequence, const Scenario & scenario, const PenaltyWeights & weights = {});

}  // namespace rewardroute
