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

#include "rewardroute/ga.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace rewardroute
{

namespace
{

// Positions [first, last) of the reorderable part of a sequence.
std::pair<std::size_t, std::size_t> interior(const WaypointSequence & s, const Scenario & scenario)
{
  const std::size_t last = scenario.fixed_end && s.size() >= 2 ? s.size() - 1 : s.size();
  return {std::min<std::size_t>(1, s.size()), last};
}

std::vector<std::size_t> interiorOf(const WaypointSequence & s, const Scenario & scenario)
{
  const auto [a, b] = interior(s, scenario);
  return {s.begin() + static_cast<std::ptrdiff_t>(a), s.begin() + static_cast<std::ptrdiff_t>(b)};
}

WaypointSequence wrap(const std::vector<std::size_t> & middle, const Scenario & scenario)
{
  WaypointSequence s;
  s.reserve(middle.size() + 2);
  s.push_back(scenario.startIndex());
  s.insert(s.end(), middle.begin(), middle.end());
  if (const auto end = scenario.endIndex()) {
    s.push_back(*end);
  }
  return s;
}

std::size_t uniformIndex(Rng & rng, std::size_t lo, std::size_t hi)
{
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace

std::size_t populationSize(const GAConfig & config, std::size_t intermediate_count)
{
  if (config.population_size > 0) {
    return std::max(config.population_size, kMinPopulation);
  }
  const auto derived = static_cast<std::size_t>(std::llround(config.beta_p * static_cast<double>(intermediate_count)));
  return std::max(derived, kMinPopulation);
}

void checkConfig(const GAConfig & config)
{
  auto unit = [](double v, const char * name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
  };
  unit(config.p_m, "p_m");
  unit(config.elite, "elite");
  unit(config.truncation, "truncation");
  unit(config.warp_fraction, "warp_fraction");
  if (!(config.elite + config.truncation < 1.0)) {
    throw std::invalid_argument("elite + truncation must be below 1");
  }
  if (config.population_size != 0 && config.population_size < kMinPopulation) {
    throw std::invalid_argument("population_size must be at least 4");
  }
  if (config.iter_max == 0) {
    throw std::invalid_argument("iter_max must be positive");
  }
  if (config.convergence_window == 0) {
    throw std::invalid_argument("convergence_window must be positive");
  }
  if (!(config.beta_p > 0.0)) {
    throw std::invalid_argument("beta_p must be positive");
  }
}

std::vector<WaypointSequence> initPopulation(const Scenario & scenario, std::size_t count, Rng & rng)
{
  std::vector<std::size_t> pool = scenario.intermediateIndices();
  std::vector<WaypointSequence> population;
  population.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t k = uniformIndex(rng, 0, pool.size());
    // Partial Fisher-Yates gives a uniform k-permutation.
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[uniformIndex(rng, i, pool.size() - 1)]);
    }
    population.push_back(wrap({pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k)}, scenario));
  }
  return population;
}

WarpedAlignment dtwWarp(std::span<const Point2> s1, std::span<const Point2> s2)
{
  return dtwWarp(s1, s2, [](const Point2 & a, const Point2 & b) { return (a - b).norm(); });
}

WarpedAlignment dtwWarp(std::span<const double> s1, std::span<const double> s2)
{
  return dtwWarp(s1, s2, [](double a, double b) { return std::abs(a - b); });
}

std::size_t projectToWaypoint(const Scenario & scenario, const Point2 & p)
{
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scenario.waypoints.size(); ++i) {
    const double d = (scenario.waypoints[i].position - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

WaypointSequence crossoverWarp(
  const WaypointSequence & s1, const WaypointSequence & s2, const Scenario & scenario, Rng & rng,
  std::optional<double> forced_beta)
{
  auto positions = [&](const WaypointSequence & s) {
    std::vector<Point2> out;
    out.reserve(s.size());
    for (std::size_t i : s) {
      out.push_back(scenario.waypoints[i].position);
    }
    return out;
  };
  const std::vector<Point2> p1 = positions(s1);
  const std::vector<Point2> p2 = positions(s2);
  const WarpedAlignment align = dtwWarp(std::span<const Point2>(p1), std::span<const Point2>(p2));

  std::uniform_real_distribution<double> beta_dist(kBetaLow, kBetaHigh);
  std::vector<bool> seen(scenario.waypoints.size(), false);
  std::vector<std::size_t> middle;
  for (const auto & [i, j] : align.pairs) {
    const double beta = forced_beta ? *forced_beta : beta_dist(rng);
    const Point2 blend = (1.0 - beta) * p1[i] + beta * p2[j];
    const std::size_t q = projectToWaypoint(scenario, blend);
    if (!scenario.isIntermediate(q) || seen[q]) {
      continue;
    }
    seen[q] = true;
    middle.push_back(q);
  }
  return wrap(middle, scenario);
}

WaypointSequence crossoverSubsequence(
  const WaypointSequence & s1, const WaypointSequence & s2, const Scenario & scenario, Rng & rng)
{
  const std::vector<std::size_t> i1 = interiorOf(s1, scenario);
  const std::vector<std::size_t> i2 = interiorOf(s2, scenario);
  const std::size_t a = uniformIndex(rng, 0, i1.size());
  const std::size_t b = uniformIndex(rng, a, i1.size());
  const std::vector<std::size_t> block(i1.begin() + static_cast<std::ptrdiff_t>(a), i1.begin() + static_cast<std::ptrdiff_t>(b));

  std::vector<bool> in_block(scenario.waypoints.size(), false);
  for (std::size_t q : block) {
    in_block[q] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t q : i2) {
    if (!in_block[q]) {
      rest.push_back(q);
    }
  }
  const std::size_t at = uniformIndex(rng, 0, rest.size());
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(at), block.begin(), block.end());
  return wrap(rest, scenario);
}

WaypointSequence swapPositions(WaypointSequence s, std::size_t a, std::size_t b)
{
  std::swap(s.at(a), s.at(b));
  return s;
}

WaypointSequence mutate(WaypointSequence s, double p_m, const Scenario & scenario, Rng & rng)
{
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const auto [first, last] = interior(s, scenario);
  const std::size_t k = last - first;
  if (!(u < p_m) || k < 2) {
    return s;
  }
  const std::size_t a = uniformIndex(rng, 0, k - 1);
  std::size_t b = uniformIndex(rng, 0, k - 2);
  if (b >= a) {
    ++b;
  }
  return swapPositions(std::move(s), first + a, first + b);
}

bool isValidSequence(const WaypointSequence & s, const Scenario & scenario)
{
  if (s.empty() || s.front() != scenario.startIndex()) {
    return false;
  }
  const auto end = scenario.endIndex();
  if (end && (s.size() < 2 || s.back() != *end)) {
    return false;
  }
  std::vector<bool> seen(scenario.waypoints.size(), false);
  const auto [first, last] = interior(s, scenario);
  for (std::size_t k = first; k < last; ++k) {
    const std::size_t q = s[k];
    if (q >= scenario.waypoints.size() || !scenario.isIntermediate(q) || seen[q]) {
      return false;
    }
    seen[q] = true;
  }
  return true;
}

std::vector<std::size_t> stochasticUniversalSampling(std::span<const double> weights, std::size_t count, Rng & rng)
{
  std::vector<std::size_t> picked;
  if (count == 0 || weights.empty()) {
    return picked;
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double spacing = total / static_cast<double>(count);
  const double start = std::uniform_real_distribution<double>(0.0, spacing)(rng);
  picked.reserve(count);
  std::size_t i = 0;
  double cumulative = weights[0];
  for (std::size_t k = 0; k < count; ++k) {
    const double pointer = start + static_cast<double>(k) * spacing;
    while (pointer >= cumulative && i + 1 < weights.size()) {
      cumulative += weights[++i];
    }
    picked.push_back(i);
  }
  return picked;
}

BreedCounts breedCounts(const GAConfig & config, std::size_t population)
{
  const double c = static_cast<double>(population);
  BreedCounts counts;
  counts.discarded = static_cast<std::size_t>(std::floor(config.truncation * c));
  counts.discarded = std::min(counts.discarded, population - 1);
  counts.elites = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.elite * c)));
  counts.elites = std::min(counts.elites, population);
  const std::size_t offspring = population - counts.elites;
  counts.warp = static_cast<std::size_t>(std::llround(config.warp_fraction * static_cast<double>(offspring)));
  counts.subsequence = offspring - counts.warp;
  return counts;
}

std::vector<WaypointSequence> selectAndBreed(
  const std::vector<EvaluatedIndividual> & population, const GAConfig & config, const Scenario & scenario, Rng & rng)
{
  const std::size_t c = population.size();
  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return population[a].h < population[b].h; });

  const BreedCounts counts = breedCounts(config, c);
  const std::size_t survivors = c - counts.discarded;
  std::vector<double> weights(survivors);
  for (std::size_t r = 0; r < survivors; ++r) {
    weights[r] = static_cast<double>(survivors - r);
  }

  std::vector<WaypointSequence> next;
  next.reserve(c);
  for (std::size_t e = 0; e < counts.elites; ++e) {
    next.push_back(population[order[e]].sequence);
  }
  const std::size_t offspring = counts.warp + counts.subsequence;
  std::vector<std::size_t> parents = stochasticUniversalSampling(weights, 2 * offspring, rng);
  std::shuffle(parents.begin(), parents.end(), rng);
  for (std::size_t k = 0; k < offspring; ++k) {
    const WaypointSequence & a = population[order[parents[2 * k]]].sequence;
    const WaypointSequence & b = population[order[parents[2 * k + 1]]].sequence;
    WaypointSequence child =
      k < counts.warp ? crossoverWarp(a, b, scenario, rng) : crossoverSubsequence(a, b, scenario, rng);
    next.push_back(mutate(std::move(child), config.p_m, scenario, rng));
  }
  return next;
}

namespace
{

std::vector<EvaluatedIndividual> evaluateAll(
  FitnessEvaluator & evaluator, const std::vector<WaypointSequence> & population, unsigned threads)
{
  std::vector<EvaluatedIndividual> out(population.size());
  if (threads <= 1 || population.size() < 2) {
    for (std::size_t i = 0; i < population.size(); ++i) {
      out[i] = evaluator.evaluate(population[i]);
    }
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < population.size(); i = next.fetch_add(1)) {
      out[i] = evaluator.evaluate(population[i]);
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(population.size()));
    for (unsigned t = 0; t < n; ++t) {
      pool.emplace_back(worker);
    }
  }
  return out;
}

}  // namespace

GAResult runGA(FitnessEvaluator & evaluator, const GAConfig & config, const GenerationCallback & on_generation)
{
  checkConfig(config);
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

  const Scenario & scenario = evaluator.scenario();
  GAResult result;
  result.population_size = populationSize(config, scenario.intermediateIndices().size());
  Rng rng(config.seed);
  std::vector<WaypointSequence> population = initPopulation(scenario, result.population_size, rng);

  bool have_best = false;
  for (std::size_t g = 0; g < config.iter_max; ++g) {
    const std::vector<EvaluatedIndividual> evaluated = evaluateAll(evaluator, population, config.threads);
    double sum = 0.0;
    std::size_t gen_best = 0;
    for (std::size_t i = 0; i < evaluated.size(); ++i) {
      sum += evaluated[i].h;
      if (evaluated[i].h < evaluated[gen_best].h) {
        gen_best = i;
      }
    }
    if (!have_best || evaluated[gen_best].h < result.best.h) {
      result.best = evaluated[gen_best];
      result.time_to_best = seconds();
      have_best = true;
    }
    GenerationStats stats;
    stats.generation = g;
    stats.best_h = result.best.h;
    stats.mean_h = sum / static_cast<double>(evaluated.size());
    stats.best_reward = result.best.report.reward;
    stats.feasible = result.best.report.feasible();
    result.history.push_back(stats);
    if (on_generation) {
      on_generation(stats);
    }
    if (g >= config.convergence_window &&
        result.history[g - config.convergence_window].best_h - result.best.h < config.convergence_epsilon) {
      result.converged = true;
      break;
    }
    if (g + 1 < config.iter_max) {
      population = selectAndBreed(evaluated, config, scenario, rng);
    }
  }
  result.elapsed = seconds();
  return result;
}

void writeHistoryCsv(std::ostream & out, const std::vector<GenerationStats> & history)
{
  out << "generation,best_h,mean_h,best_reward,feasible\n";
  char line[160];
  for (const GenerationStats & s : history) {
    std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g,%d\n", s.generation, s.best_h, s.mean_h, s.best_reward,
                  s.feasible ? 1 : 0);
    out << line;
  }
}

}  // namespace rewardroute
