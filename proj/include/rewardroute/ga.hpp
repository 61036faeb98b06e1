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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "rewardroute/fitness.hpp"

namespace rewardroute
{

using Rng = std::mt19937_64;

struct GAConfig
{
  /// Zero derives the size from beta_p times the intermediate count.
  std::size_t population_size = 0;
  double p_m = 0.1;
  double elite = 0.01;
  double truncation = 0.2;
  double warp_fraction = 0.5;
  std::size_t iter_max = 500;
  std::size_t convergence_window = 50;
  double convergence_epsilon = 1e-6;
  double beta_p = 20.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

inline constexpr std::size_t kMinPopulation = 4;

std::size_t populationSize(const GAConfig & config, std::size_t intermediate_count);

/// Throws std::invalid_argument naming the first bad field.
void checkConfig(const GAConfig & config);

std::vector<WaypointSequence> initPopulation(const Scenario & scenario, std::size_t count, Rng & rng);

/// Monotone alignment of two sequences; pairs are 0-based (i, j).
struct WarpedAlignment
{
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double cost = 0.0;
};

/// D(i,j) = d(s1_i, s2_j) + min(D(i-1,j-1), D(i-1,j), D(i,j-1)); backtracking
/// prefers the diagonal, then (i-1, j), then (i, j-1).
template<typename T, typename Dist>
WarpedAlignment dtwWarp(std::span<const T> s1, std::span<const T> s2, Dist dist)
{
  const std::size_t n = s1.size();
  const std::size_t m = s2.size();
  WarpedAlignment out;
  if (n == 0 || m == 0) {
    return out;
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n * m, inf);
  auto at = [&](std::size_t i, std::size_t j) -> double & { return d[i * m + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double best = 0.0;
      if (i > 0 || j > 0) {
        best = inf;
        if (i > 0 && j > 0) best = std::min(best, at(i - 1, j - 1));
        if (i > 0) best = std::min(best, at(i - 1, j));
        if (j > 0) best = std::min(best, at(i, j - 1));
      }
      at(i, j) = dist(s1[i], s2[j]) + best;
    }
  }
  out.cost = at(n - 1, m - 1);
  std::size_t i = n - 1;
  std::size_t j = m - 1;
  out.pairs.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const double diag = at(i - 1, j - 1);
      const double up = at(i - 1, j);
      const double left = at(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    } else if (i > 0) {
      --i;
    } else {
      --j;
    }
    out.pairs.emplace_back(i, j);
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

WarpedAlignment dtwWarp(std::span<const Point2> s1, std::span<const Point2> s2);
WarpedAlignment dtwWarp(std::span<const double> s1, std::span<const double> s2);

/// Index of the nearest waypoint; ties go to the lowest index.
std::size_t projectToWaypoint(const Scenario & scenario, const Point2 & p);

inline constexpr double kBetaLow = -0.15;
inline constexpr double kBetaHigh = 1.15;

/// DTW alignment of the parents' waypoint positions, extended convex blend per
/// aligned pair, projection, first-occurrence dedup and fixed endpoints.
/// A forced beta replaces the random draw for every aligned pair.
WaypointSequence crossoverWarp(
  const WaypointSequence & s1, const WaypointSequence & s2, const Scenario & scenario, Rng & rng,
  std::optional<double> forced_beta = std::nullopt);

/// A random contiguous block of s1's intermediates is removed from s2 and
/// inserted back into it at a random position.
WaypointSequence crossoverSubsequence(
  const WaypointSequence & s1, const WaypointSequence & s2, const Scenario & scenario, Rng & rng);

/// Swaps two distinct intermediate positions with probability p_m.
WaypointSequence mutate(WaypointSequence s, double p_m, const Scenario & scenario, Rng & rng);

/// Swaps the intermediate positions a and b (0-based indices into s).
WaypointSequence swapPositions(WaypointSequence s, std::size_t a, std::size_t b);

/// Fixed endpoints, no duplicates and valid intermediate indices.
bool isValidSequence(const WaypointSequence & s, const Scenario & scenario);

/// Stochastic universal sampling of `count` indices with the given weights.
std::vector<std::size_t> stochasticUniversalSampling(std::span<const double> weights, std::size_t count, Rng & rng);

struct BreedCounts
{
  std::size_t discarded = 0;
  std::size_t elites = 0;
  std::size_t warp = 0;
  std::size_t subsequence = 0;
};

BreedCounts breedCounts(const GAConfig & config, std::size_t population);

std::vector<WaypointSequence> selectAndBreed(
  const std::vector<EvaluatedIndividual> & population, const GAConfig & config, const Scenario & scenario, Rng & rng);

struct GenerationStats
{
  std::size_t generation = 0;
  double best_h = 0.0;
  double mean_h = 0.0;
  double best_reward = 0.0;
  bool feasible = false;
};

struct GAResult
{
  EvaluatedIndividual best;
  std::vector<GenerationStats> history;
  std::size_t population_size = 0;
  bool converged = false;
  /// Seconds from the start of the run until the final best was first found.
  double time_to_best = 0.0;
  double elapsed = 0.0;
};

/// Called after every generation with its statistics.
using GenerationCallback = std::function<void(const GenerationStats &)>;

GAResult runGA(FitnessEvaluator & evaluator, const GAConfig & config, const GenerationCallback & on_generation = {});

/// CSV `generation,best_h,mean_h,best_reward,feasible`.
void writeHistoryCsv(std::ostream & out, const std::vector<GenerationStats> & history);

}  // namespace rewardroute
