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
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "rewardroute/ga.hpp"

namespace rewardroute
{

inline constexpr std::size_t kEnumerationLimit = 8;

class EnumerationLimitError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Sum over k of C(n, k) k!.
std::size_t sequenceCount(std::size_t intermediate_count);

/// Every duplicate-free sequence over the given intermediates, wrapped with
/// start (and end when present), in depth-first order.
void forEachSequence(
  std::span<const std::size_t> intermediates, std::size_t start, std::optional<std::size_t> end,
  const std::function<void(const WaypointSequence &)> & visit);

/// Labels 0 (start), 1..n (intermediates) and n+1 (end when fixed_end).
std::vector<WaypointSequence> enumerateSequences(std::size_t intermediate_count, bool fixed_end);

/// Minimum h over all sequences; ties go to the shorter path, then the shorter sequence.
EvaluatedIndividual bruteForceBest(FitnessEvaluator & evaluator);

/// First k labels, first occurrences kept, wrapped with the fixed endpoints.
WaypointSequence decodeTruncation(std::span<const std::size_t> labels, std::size_t k, const Scenario & scenario);
/// The last entry of x is k.
WaypointSequence decodeTruncation(std::span<const std::size_t> x, const Scenario & scenario);

/// Built-in 10 x 10 m benchmark map with its fixed start and end.
Scenario benchmarkMap();

inline constexpr std::size_t kMaxRejections = 10000;

class SamplingError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Benchmark map with `count` random intermediate waypoints of integer reward 1..10.
Scenario randomScenario(std::size_t count, Rng & rng, double resolution = 0.1);

struct BenchRow
{
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double best_h = 0.0;
  double best_reward = 0.0;
  double time_s = 0.0;
};

struct BenchTable
{
  std::vector<BenchRow> rows;
  /// Least-squares slope of log time against log n.
  double slope = 0.0;
};

/// Seed of row `row` from the sweep seed.
std::uint64_t trialSeed(std::uint64_t seed, std::size_t row);

double logLogSlope(std::span<const BenchRow> rows);

BenchTable complexitySweep(
  std::span<const std::size_t> counts, std::size_t trials, const GAConfig & config, std::uint64_t seed,
  double resolution = 0.1, const std::function<void(const BenchRow &)> & on_row = {});

/// CSV `n,trial,seed,best_h,best_reward,time_s` and a trailing `slope,<value>` row.
void writeBenchCsv(std::ostream & out, const BenchTable & table);

}  // namespace rewardroute
