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

#include "rewardroute/solution_io.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace rewardroute
{

namespace
{

using ojson = nlohmann::ordered_json;

ojson configJson(const GAConfig & c)
{
  ojson j;
  j["population_size"] = c.population_size;
  j["p_m"] = c.p_m;
  j["elite"] = c.elite;
  j["truncation"] = c.truncation;
  j["warp_fraction"] = c.warp_fraction;
  j["iter_max"] = c.iter_max;
  j["convergence_window"] = c.convergence_window;
  j["convergence_epsilon"] = c.convergence_epsilon;
  j["beta_p"] = c.beta_p;
  j["threads"] = c.threads;
  return j;
}

GAConfig configFromJson(const ojson & j)
{
  GAConfig c;
  c.population_size = j.at("population_size").get<std::size_t>();
  c.p_m = j.at("p_m").get<double>();
  c.elite = j.at("elite").get<double>();
  c.truncation = j.at("truncation").get<double>();
  c.warp_fraction = j.at("warp_fraction").get<double>();
  c.iter_max = j.at("iter_max").get<std::size_t>();
  c.convergence_window = j.at("convergence_window").get<std::size_t>();
  c.convergence_epsilon = j.at("convergence_epsilon").get<double>();
  c.beta_p = j.at("beta_p").get<double>();
  c.threads = j.at("threads").get<unsigned>();
  return c;
}

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SolutionDocument makeSolution(const Scenario & scenario, const EvaluatedIndividual & best)
{
  SolutionDocument doc;
  doc.scenario_digest = scenarioDigest(scenario);
  doc.sequence = best.sequence;
  doc.h = best.h;
  doc.reward = best.report.reward;
  doc.t_f = best.report.t_f;
  doc.path_length = best.report.path_length;
  doc.violations = best.report;
  return doc;
}

std::string solutionToJson(const SolutionDocument & doc)
{
  ojson j;
  j["scenario_digest"] = doc.scenario_digest;
  j["sequence"] = doc.sequence;
  j["h"] = doc.h;
  j["reward"] = doc.reward;
  j["t_f"] = doc.t_f;
  j["path_length"] = doc.path_length;
  j["feasible"] = doc.violations.feasible();
  ojson v;
  v["time"] = doc.violations.time;
  v["distance"] = doc.violations.distance;
  v["obstacle"] = doc.violations.obstacle;
  ojson channels = ojson::array();
  for (const auto & ch : doc.violations.channels) {
    channels.push_back(
      {{"name", ch.name}, {"kind", ch.kind == ChannelKind::Input ? "input" : "state"}, {"value", ch.value}});
  }
  v["channels"] = channels;
  j["violations"] = v;
  j["failure"] = doc.violations.failure ? ojson(*doc.violations.failure) : ojson(nullptr);
  j["trajectory"] = doc.trajectory_file;
  j["method"] = doc.method;
  j["config"] = doc.config ? configJson(*doc.config) : ojson(nullptr);
  j["seed"] = doc.seed ? ojson(*doc.seed) : ojson(nullptr);
  return j.dump(2) + "\n";
}

SolutionDocument solutionFromJson(std::string_view text)
{
  ojson j;
  try {
    j = ojson::parse(text.begin(), text.end());
  } catch (const ojson::parse_error & e) {
    throw std::runtime_error(std::string("solution parse error: ") + e.what());
  }
  try {
    SolutionDocument doc;
    doc.scenario_digest = j.at("scenario_digest").get<std::string>();
    doc.sequence = j.at("sequence").get<WaypointSequence>();
    doc.h = j.at("h").get<double>();
    doc.reward = j.at("reward").get<double>();
    doc.t_f = j.at("t_f").get<double>();
    doc.path_length = j.at("path_length").get<double>();
    const ojson & v = j.at("violations");
    doc.violations.time = v.at("time").get<double>();
    doc.violations.distance = v.at("distance").get<double>();
    doc.violations.obstacle = v.at("obstacle").get<double>();
    for (const auto & ch : v.at("channels")) {
      doc.violations.channels.push_back(
        {ch.at("name").get<std::string>(),
         ch.at("kind").get<std::string>() == "input" ? ChannelKind::Input : ChannelKind::State,
         ch.at("value").get<double>()});
    }
    doc.violations.t_f = doc.t_f;
    doc.violations.path_length = doc.path_length;
    doc.violations.reward = doc.reward;
    if (!j.at("failure").is_null()) {
      doc.violations.failure = j.at("failure").get<std::string>();
    }
    doc.trajectory_file = j.at("trajectory").get<std::string>();
    doc.method = j.at("method").get<std::string>();
    if (!j.at("config").is_null()) {
      doc.config = configFromJson(j.at("config"));
    }
    if (!j.at("seed").is_null()) {
      doc.seed = j.at("seed").get<std::uint64_t>();
    }
    return doc;
  } catch (const ojson::exception & e) {
    throw std::runtime_error(std::string("solution document: ") + e.what());
  }
}

void writeSvgPlot(std::ostream & out, const Scenario & scenario, const Trajectory * trajectory)
{
  constexpr double kScale = 60.0;
  const Environment & env = scenario.environment;
  const double w = env.x_max - env.x_min;
  const double h = env.y_max - env.y_min;
  // SVG y grows downwards.
  const auto px = [&](double x) { return num((x - env.x_min) * kScale); };
  const auto py = [&](double y) { return num((env.y_max - y) * kScale); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w * kScale) << "\" height=\""
      << num(h * kScale) << "\" viewBox=\"0 0 " << num(w * kScale) << ' ' << num(h * kScale) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(w * kScale) << "\" height=\"" << num(h * kScale)
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  for (const Rect & r : env.obstacles) {
    out << "<rect x=\"" << px(r.x) << "\" y=\"" << py(r.y + r.h) << "\" width=\"" << num(r.w * kScale)
        << "\" height=\"" << num(r.h * kScale) << "\" fill=\"dimgray\"/>\n";
  }
  double reward_max = 0.0;
  for (const Waypoint & wp : scenario.waypoints) {
    reward_max = std::max(reward_max, wp.reward);
  }
  for (std::size_t i = 0; i < scenario.waypoints.size(); ++i) {
    const Waypoint & wp = scenario.waypoints[i];
    const bool endpoint = i == scenario.startIndex() || (scenario.endIndex() && i == *scenario.endIndex());
    const double radius = endpoint ? 4.0 : 3.0 + (reward_max > 0.0 ? 9.0 * wp.reward / reward_max : 0.0);
    out << "<circle cx=\"" << px(wp.position.x()) << "\" cy=\"" << py(wp.position.y()) << "\" r=\"" << num(radius)
        << "\" fill=\"" << (endpoint ? "green" : "steelblue") << "\" fill-opacity=\"0.7\"/>\n";
  }
  if (trajectory && !trajectory->samples.empty()) {
    out << "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < trajectory->samples.size(); ++i) {
      const Point2 & p = trajectory->samples[i].position;
      out << (i ? " " : "") << px(p.x()) << ',' << py(p.y());
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace rewardroute
