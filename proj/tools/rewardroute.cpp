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

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rewardroute/oracle_bench.hpp"
#include "rewardroute/solution_io.hpp"

using namespace rewardroute;

namespace
{

struct GaFlags
{
  std::optional<std::size_t> max_iter;
  std::optional<std::size_t> pop_size;
  std::optional<double> pm;
  std::optional<double> elite;
  std::optional<double> trunc;
  std::optional<double> cmix;
  std::optional<unsigned> threads;
  std::uint64_t seed = 0;

  void attach(CLI::App & app)
  {
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--max-iter", max_iter, "generation cap");
    app.add_option("--pop-size", pop_size, "population size (default 20 per intermediate)");
    app.add_option("--pm", pm, "mutation probability");
    app.add_option("--elite", elite, "elite fraction");
    app.add_option("--trunc", trunc, "truncation fraction");
    app.add_option("--cmix", cmix, "share of warp crossovers");
    app.add_option("--threads", threads, "evaluation threads (env REWARD_ROUTE_THREADS)")->check(CLI::PositiveNumber);
  }

  GAConfig config() const
  {
    GAConfig c;
    c.seed = seed;
    if (max_iter) {
      c.iter_max = *max_iter;
    }
    if (pop_size) {
      c.population_size = *pop_size;
    }
    if (pm) {
      c.p_m = *pm;
    }
    if (elite) {
      c.elite = *elite;
    }
    if (trunc) {
      c.truncation = *trunc;
    }
    if (cmix) {
      c.warp_fraction = *cmix;
    }
    if (threads) {
      c.threads = *threads;
    } else if (const char * env = std::getenv("REWARD_ROUTE_THREADS")) {
      const long n = std::strtol(env, nullptr, 10);
      if (n <= 0) {
        throw std::invalid_argument(std::string("REWARD_ROUTE_THREADS: expected a positive integer, got '") + env +
                                    "'");
      }
      c.threads = static_cast<unsigned>(n);
    }
    checkConfig(c);
    return c;
  }
};

std::ofstream openOut(const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  return out;
}

void writeText(const std::filesystem::path & path, const std::string & text)
{
  std::ofstream out = openOut(path);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
}

void makeDir(const std::filesystem::path & dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  }
}

int runPlan(const std::string & scenario_path, const std::filesystem::path & out_dir, const GaFlags & flags, bool plot)
{
  const Scenario scenario = loadScenarioFile(scenario_path);
  GAConfig config = flags.config();
  makeDir(out_dir);

  FitnessEvaluator evaluator(scenario);
  const GAResult result = runGA(evaluator, config);
  const PlanResult plan = evaluator.plan(result.best.sequence);

  config.population_size = result.population_size;
  SolutionDocument doc = makeSolution(scenario, result.best);
  doc.config = config;
  doc.seed = config.seed;
  writeText(out_dir / "solution.json", solutionToJson(doc));
  {
    std::ofstream out = openOut(out_dir / "trajectory.csv");
    writeTrajectoryCsv(out, plan.trajectory);
  }
  {
    std::ofstream out = openOut(out_dir / "states.csv");
    writeStatesCsv(out, plan.states);
  }
  {
    std::ofstream out = openOut(out_dir / "history.csv");
    writeHistoryCsv(out, result.history);
  }
  if (plot) {
    std::ofstream out = openOut(out_dir / "plot.svg");
    writeSvgPlot(out, scenario, &plan.trajectory);
  }

  const bool feasible = result.best.report.feasible();
  std::printf("best h %.9g  reward %g  sequence", result.best.h, result.best.report.reward);
  for (std::size_t i : result.best.sequence) {
    std::printf(" %zu", i);
  }
  std::printf("\n%s after %zu generations\n", feasible ? "feasible" : "infeasible", result.history.size());
  return feasible ? 0 : 2;
}

int runOracle(const std::string & scenario_path, const std::filesystem::path & out_dir)
{
  const Scenario scenario = loadScenarioFile(scenario_path);
  const std::size_t count = scenario.intermediateIndices().size();
  if (count > kEnumerationLimit) {
    throw EnumerationLimitError("oracle: " + std::to_string(count) + " intermediate waypoints exceed the limit of " +
                                std::to_string(kEnumerationLimit));
  }
  makeDir(out_dir);
  FitnessEvaluator evaluator(scenario);
  const EvaluatedIndividual best = bruteForceBest(evaluator);
  SolutionDocument doc = makeSolution(scenario, best);
  doc.method = "enumeration";
  doc.trajectory_file.clear();
  writeText(out_dir / "oracle.json", solutionToJson(doc));
  std::printf("optimum h %.9g over %zu sequences\n", best.h, sequenceCount(count));
  return 0;
}

int runBench(
  const std::vector<std::size_t> & counts, std::size_t trials, const std::filesystem::path & out_dir,
  const GaFlags & flags)
{
  if (counts.empty()) {
    throw std::invalid_argument("bench: --counts is empty");
  }
  if (trials == 0) {
    throw std::invalid_argument("bench: --trials must be positive");
  }
  const GAConfig config = flags.config();
  makeDir(out_dir);
  const BenchTable table = complexitySweep(counts, trials, config, config.seed, 0.1, [](const BenchRow & row) {
    std::printf("n=%zu trial=%zu h=%.6g time=%.3fs\n", row.n, row.trial, row.best_h, row.time_s);
    std::fflush(stdout);
  });
  std::ofstream out = openOut(out_dir / "bench.csv");
  writeBenchCsv(out, table);
  std::printf("slope %.4f\n", table.slope);
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Reward-collecting route planner"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  GaFlags plan_flags;
  bool plot = true;
  CLI::App * plan = app.add_subcommand("plan", "run the genetic planner");
  plan->add_option("--scenario", scenario_path, "scenario JSON")->required();
  plan->add_option("--out", out_dir, "output directory");
  plan->add_flag("--plot,!--no-plot", plot, "write plot.svg (default on)");
  plan_flags.attach(*plan);

  CLI::App * oracle = app.add_subcommand("oracle", "exhaustive search for small scenarios");
  oracle->add_option("--scenario", scenario_path, "scenario JSON")->required();
  oracle->add_option("--out", out_dir, "output directory");
  std::uint64_t unused_seed = 0;
  oracle->add_option("--seed", unused_seed, "accepted and ignored");

  std::vector<std::size_t> counts = {10, 20, 30, 40};
  std::size_t trials = 5;
  GaFlags bench_flags;
  CLI::App * bench = app.add_subcommand("bench", "runtime sweep over random scenarios");
  bench->add_option("--counts", counts, "intermediate waypoint counts")->delimiter(',');
  bench->add_option("--trials", trials, "trials per count");
  bench->add_option("--out", out_dir, "output directory");
  bench_flags.attach(*bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return 1;
  }

  try {
    if (plan->parsed()) {
      return runPlan(scenario_path, out_dir, plan_flags, plot);
    }
    if (oracle->parsed()) {
      return runOracle(scenario_path, out_dir);
    }
    return runBench(counts, trials, out_dir, bench_flags);
  } catch (const std::exception & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
