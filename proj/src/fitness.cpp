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

#include "rewardroute/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace rewardroute
{

double ViolationReport::penalty(const PenaltyWeights & w) const
{
  double r = w.time * time + w.distance * distance + w.obstacle * obstacle;
  for (const ChannelViolation & c : channels) {
    r += (c.kind == ChannelKind::Input ? w.input : w.state) * c.value;
  }
  return r;
}

bool ViolationReport::feasible() const
{
  if (failure || time != 0.0 || distance != 0.0 || obstacle != 0.0) {
    return false;
  }
  return std::all_of(channels.begin(), channels.end(), [](const ChannelViolation & c) { return c.value == 0.0; });
}

double violationTime(double t_f, std::optional<double> t_max)
{
  if (!t_max || t_f <= *t_max) {
    return 0.0;
  }
  return (t_f - *t_max) / *t_max;
}

double violationDistance(double d, std::optional<double> d_max)
{
  if (!d_max || d <= *d_max) {
    return 0.0;
  }
  return (d - *d_max) / *d_max;
}

double violationObstacle(const Trajectory & trajectory, const OccupancyGrid & grid)
{
  const auto & s = trajectory.samples;
  if (s.empty()) {
    return 0.0;
  }
  if (s.size() == 1) {
    return isFree(grid, s.front().position) ? 0.0 : 1.0;
  }
  double total = 0.0;
  double free = 0.0;
  double prev = isFree(grid, s.front().position) ? 1.0 : 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double cur = isFree(grid, s[i].position) ? 1.0 : 0.0;
    const double ds = (s[i].position - s[i - 1].position).norm();
    total += ds;
    free += 0.5 * (prev + cur) * ds;
    prev = cur;
  }
  if (!(total > 0.0)) {
    return prev == 1.0 ? 0.0 : 1.0;
  }
  return std::clamp(1.0 - free / total, 0.0, 1.0);
}

namespace
{

template<typename Excess>
double exceedanceIntegral(
  std::span<const double> t, std::span<const double> magnitude, double bound, double t_f, Excess excess)
{
  if (!(bound > 0.0) || !(t_f > 0.0) || t.size() < 2) {
    return 0.0;
  }
  double integral = 0.0;
  double prev = excess(magnitude[0]);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double cur = excess(magnitude[i]);
    integral += 0.5 * (prev + cur) * (t[i] - t[i - 1]);
    prev = cur;
  }
  return integral / (t_f * bound);
}

}  // namespace

double violationInput(std::span<const double> t, std::span<const double> magnitude, double u_bar, double t_f)
{
  return exceedanceIntegral(t, magnitude, u_bar, t_f, [u_bar](double m) { return std::max(std::abs(m) - u_bar, 0.0); });
}

double violationBelow(std::span<const double> t, std::span<const double> magnitude, double u_min, double t_f)
{
  return exceedanceIntegral(t, magnitude, u_min, t_f, [u_min](double m) { return std::max(u_min - std::abs(m), 0.0); });
}

FitnessEvaluator::FitnessEvaluator(Scenario scenario, FitnessOptions options, bool memoize)
: scenario_(std::move(scenario)), options_(options), grid_(rasterize(scenario_)), memoize_(memoize)
{
  double min_positive = std::numeric_limits<double>::infinity();
  for (std::size_t i : scenario_.intermediateIndices()) {
    const double w = scenario_.waypoints[i].reward;
    reward_max_ += w;
    if (w > 0.0) {
      min_positive = std::min(min_positive, w);
    }
    ++intermediate_count_;
  }
  reward_epsilon_ = std::isfinite(min_positive) ? 0.5 * min_positive : 0.0;
}

double FitnessEvaluator::rewardTerm(double reward) const
{
  if (!(reward_max_ > 0.0)) {
    return 1.0;
  }
  return reward_max_ / std::max(reward, reward_epsilon_);
}

void FitnessEvaluator::checkSequence(std::span<const std::size_t> sequence) const
{
  const std::size_t n = scenario_.waypoints.size();
  if (sequence.empty() || sequence.front() != scenario_.startIndex()) {
    throw std::invalid_argument("sequence must begin at the start waypoint");
  }
  const auto end = scenario_.endIndex();
  if (end && (sequence.size() < 2 || sequence.back() != *end)) {
    throw std::invalid_argument("sequence must finish at the end waypoint");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const std::size_t i = sequence[k];
    if (i >= n) {
      throw std::invalid_argument("sequence index " + std::to_string(i) + " out of range");
    }
    if (seen[i]) {
      throw std::invalid_argument("sequence repeats waypoint " + std::to_string(i));
    }
    seen[i] = true;
    const bool endpoint = k == 0 || (end && k + 1 == sequence.size());
    if (!endpoint && !scenario_.isIntermediate(i)) {
      throw std::invalid_argument("waypoint " + std::to_string(i) + " cannot be an intermediate");
    }
  }
}

PlanResult FitnessEvaluator::plan(std::span<const std::size_t> sequence)
{
  checkSequence(sequence);
  evaluations_.fetch_add(1);

  PlanResult out;
  out.individual.sequence.assign(sequence.begin(), sequence.end());
  ViolationReport & report = out.individual.report;

  std::size_t visited = 0;
  for (std::size_t i : sequence) {
    if (scenario_.isIntermediate(i)) {
      report.reward += scenario_.waypoints[i].reward;
      ++visited;
    }
  }
  if (visited == intermediate_count_) {
    report.reward = reward_max_;
  }

  const ConstraintSet & c = scenario_.constraints;
  try {
    out.polyline = polylineForSequence(grid_, sequence, scenario_, &pairs_);
    const auto & points = out.polyline.points;
    if (points.size() < 2) {
      TrajectorySample only;
      only.position = points.front();
      out.trajectory.samples.push_back(only);
      report.obstacle = violationObstacle(out.trajectory, grid_);
    } else {
      const std::vector<double> headings = assignHeadings(points);
      const std::vector<std::size_t> knots = cornerKnots(points, out.polyline.waypoint_points);
      RefineResult refined = refineCollision(buildPath(points, headings, knots), points, grid_, &segments_);
      out.path = std::move(refined.path);
      out.refinements = refined.insertions;

      const double length = out.path.length();
      const std::size_t samples =
        options_.sample_count > 0 ? options_.sample_count : defaultSampleCount(length, grid_.resolution());
      out.trajectory = parameterizeTime(out.path, c, samples, options_.timing);
      const FlatTrace flat = flatTraceFromTrajectory(out.trajectory);
      out.states = scenario_.model == RobotModel::DifferentialDrive
                     ? diffdriveForward(flat, scenario_.model_params)
                     : quadrupedForward(flat, options_.standard_body_twist);

      report.t_f = out.trajectory.t_f;
      report.path_length = length;
      report.time = violationTime(report.t_f, c.t_max);
      report.distance = violationDistance(length, c.d_max);
      report.obstacle = violationObstacle(out.trajectory, grid_);

      const std::size_t n = out.states.samples.size();
      std::vector<double> t(n);
      std::vector<double> speed(n);
      std::vector<double> omega(n);
      std::vector<double> accel(n);
      for (std::size_t i = 0; i < n; ++i) {
        const StateInputSample & s = out.states.samples[i];
        t[i] = s.t;
        if (out.states.model == RobotModel::DifferentialDrive) {
          speed[i] = std::abs(s.u[0]);
          omega[i] = std::abs(s.u[1]);
        } else {
          speed[i] = s.u.head<2>().norm();
          omega[i] = std::abs(s.u[2]);
        }
        accel[i] = flat[i].y_ddot.norm();
      }
      report.channels.push_back({"speed", ChannelKind::Input, violationInput(t, speed, c.v_max, report.t_f)});
      if (c.v_min > 0.0) {
        report.channels.push_back({"speed_min", ChannelKind::Input, violationBelow(t, speed, c.v_min, report.t_f)});
      }
      if (c.omega_max) {
        report.channels.push_back({"omega", ChannelKind::Input, violationInput(t, omega, *c.omega_max, report.t_f)});
      }
      if (c.accel_max) {
        report.channels.push_back({"accel", ChannelKind::State, violationInput(t, accel, *c.accel_max, report.t_f)});
      }
    }
  } catch (const std::exception & e) {
    report.failure = e.what();
    report.time = 1.0;
    report.distance = 1.0;
    report.obstacle = 1.0;
    report.channels = {{"input", ChannelKind::Input, 1.0}, {"state", ChannelKind::State, 1.0}};
  }
  out.individual.h = fitness(report);
  return out;
}

EvaluatedIndividual FitnessEvaluator::evaluate(std::span<const std::size_t> sequence)
{
  if (!memoize_) {
    return plan(sequence).individual;
  }
  WaypointSequence key(sequence.begin(), sequence.end());
  {
    std::shared_lock lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      memo_hits_.fetch_add(1);
      return it->second;
    }
  }
  EvaluatedIndividual result = plan(sequence).individual;
  std::unique_lock lock(memo_mutex_);
  memo_.emplace(std::move(key), result);
  return result;
}

EvaluatedIndividual evaluateFitness(
  std::span<const std::size_t> sequence, const Scenario & scenario, const PenaltyWeights & weights)
{
  FitnessOptions options;
  options.weights = weights;
  FitnessEvaluator evaluator(scenario, options, false);
  return evaluator.evaluate(sequence);
}

}  // namespace rewardroute
