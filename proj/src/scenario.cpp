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

#include "rewardroute/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rewardroute
{

using nlohmann::json;

double Rect::distanceTo(const Point2 & p) const
{
  const double dx = std::max({x - p.x(), 0.0, p.x() - (x + w)});
  const double dy = std::max({y - p.y(), 0.0, p.y() - (y + h)});
  return std::hypot(dx, dy);
}

std::vector<std::size_t> Scenario::intermediateIndices() const
{
  std::vector<std::size_t> out;
  const std::size_t last = fixed_end ? waypoints.size() - 1 : waypoints.size();
  for (std::size_t i = 1; i < last; ++i) {
    out.push_back(i);
  }
  return out;
}

bool Scenario::isIntermediate(std::size_t index) const
{
  if (index == 0 || index >= waypoints.size()) {
    return false;
  }
  return !(fixed_end && index == waypoints.size() - 1);
}

OccupancyGrid::OccupancyGrid(Point2 origin, double resolution, int width, int height, std::vector<std::uint8_t> cells)
: origin_(std::move(origin)), resolution_(resolution), width_(width), height_(height), cells_(std::move(cells))
{
  if (!(resolution_ > 0.0)) {
    throw std::invalid_argument("grid resolution must be positive");
  }
  if (width_ < 0 || height_ < 0 || cells_.size() != static_cast<std::size_t>(width_) * height_) {
    throw std::invalid_argument("grid cell count does not match width x height");
  }
}

Eigen::Vector2i OccupancyGrid::cellOf(const Point2 & p) const
{
  // The slack keeps points on a cell boundary in the higher-index cell
  // despite rounding in the division.
  constexpr double kSlack = 1e-9;
  const Point2 rel = (p - origin_) / resolution_;
  return {static_cast<int>(std::floor(rel.x() + kSlack)), static_cast<int>(std::floor(rel.y() + kSlack))};
}

Point2 OccupancyGrid::cellCenter(int i, int j) const
{
  return origin_ + resolution_ * Point2(i + 0.5, j + 0.5);
}

std::size_t OccupancyGrid::occupiedCount() const
{
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](std::uint8_t c) { return c != 0; }));
}

OccupancyGrid rasterize(const Environment & env, double resolution, double inflation_radius)
{
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("rasterize: resolution must be positive");
  }
  if (!(inflation_radius >= 0.0)) {
    throw std::invalid_argument("rasterize: inflation radius must be nonnegative");
  }
  const int width = std::max(1, static_cast<int>(std::ceil((env.x_max - env.x_min) / resolution - 1e-9)));
  const int height = std::max(1, static_cast<int>(std::ceil((env.y_max - env.y_min) / resolution - 1e-9)));
  const Point2 origin(env.x_min, env.y_min);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * height, 0);

  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      const Point2 c = origin + resolution * Point2(i + 0.5, j + 0.5);
      bool occ = !env.inBounds(c);
      for (std::size_t k = 0; !occ && k < env.obstacles.size(); ++k) {
        occ = env.obstacles[k].distanceTo(c) <= inflation_radius;
      }
      cells[static_cast<std::size_t>(j) * width + i] = occ ? 1 : 0;
    }
  }
  return {origin, resolution, width, height, std::move(cells)};
}

bool isFree(const OccupancyGrid & grid, const Point2 & p)
{
  if (!std::isfinite(p.x()) || !std::isfinite(p.y())) {
    return false;
  }
  const Eigen::Vector2i c = grid.cellOf(p);
  return !grid.occupied(c.x(), c.y());
}

std::vector<std::string> validate(const Scenario & scenario, const OccupancyGrid & grid)
{
  std::vector<std::string> findings;
  const Environment & env = scenario.environment;
  if (!(env.x_min < env.x_max)) {
    findings.push_back("bounds: x_min must be less than x_max");
  }
  if (!(env.y_min < env.y_max)) {
    findings.push_back("bounds: y_min must be less than y_max");
  }
  for (std::size_t k = 0; k < env.obstacles.size(); ++k) {
    const Rect & r = env.obstacles[k];
    if (!(r.w > 0.0 && r.h > 0.0)) {
      findings.push_back("obstacles[" + std::to_string(k) + "]: width and height must be positive");
    } else if (r.x > env.x_max || r.x + r.w < env.x_min || r.y > env.y_max || r.y + r.h < env.y_min) {
      findings.push_back("obstacles[" + std::to_string(k) + "]: does not intersect the environment bounds");
    }
  }

  if (scenario.waypoints.empty()) {
    findings.push_back("waypoints: at least one waypoint (the start) is required");
  }
  if (scenario.fixed_end && scenario.waypoints.size() < 2) {
    findings.push_back("waypoints: fixed_end requires at least two waypoints");
  }
  for (std::size_t i = 0; i < scenario.waypoints.size(); ++i) {
    const Waypoint & wp = scenario.waypoints[i];
    const std::string name = "waypoint " + std::to_string(i);
    if (!isFree(grid, wp.position)) {
      findings.push_back(name + ": not in the free space of the inflated grid");
    }
    if (scenario.isIntermediate(i)) {
      if (!(wp.reward > 0.0)) {
        findings.push_back(name + ": intermediate reward must be positive");
      }
    } else if (wp.reward != 0.0) {
      findings.push_back(name + ": start/end reward must be zero");
    }
  }

  const ConstraintSet & c = scenario.constraints;
  auto positive = [&](const std::optional<double> & v, const char * field) {
    if (v && !(*v > 0.0)) {
      findings.push_back(std::string("constraints: ") + field + " must be positive");
    }
  };
  positive(c.t_max, "t_max");
  positive(c.d_max, "d_max");
  positive(c.omega_max, "omega_max");
  positive(c.accel_max, "accel_max");
  if (!(c.v_max > 0.0)) {
    findings.push_back("constraints: v_max must be positive");
  }
  if (!(c.v_min >= 0.0)) {
    findings.push_back("constraints: v_min must be nonnegative");
  }
  if (c.v_min > c.v_max) {
    findings.push_back("constraints: v_min exceeds v_max");
  }
  if (scenario.model_params && !(scenario.model_params->wheel_radius > 0.0 && scenario.model_params->track_width > 0.0)) {
    findings.push_back("model_params: r and d_v must be positive");
  }
  if (!(scenario.grid_resolution > 0.0)) {
    findings.push_back("grid: resolution must be positive");
  }
  if (!(scenario.inflation_radius >= 0.0)) {
    findings.push_back("grid: inflation must be nonnegative");
  }
  return findings;
}

std::vector<std::string> validate(const Scenario & scenario)
{
  const Environment & env = scenario.environment;
  if (!(scenario.grid_resolution > 0.0) || !(scenario.inflation_radius >= 0.0) || !(env.x_min < env.x_max) ||
      !(env.y_min < env.y_max)) {
    // Grid cannot be built; report structural findings against an all-occupied stand-in.
    OccupancyGrid blocked({0.0, 0.0}, 1.0, 0, 0, {});
    return validate(scenario, blocked);
  }
  return validate(scenario, rasterize(scenario));
}

namespace
{

std::string lineContext(std::string_view text, std::size_t byte)
{
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void rejectUnknown(const json & obj, std::initializer_list<std::string_view> allowed, const std::string & where)
{
  for (const auto & [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ScenarioParseError(where + ": unknown key '" + key + "'");
    }
  }
}

const json & requireObject(const json & j, const std::string & where)
{
  if (!j.is_object()) {
    throw ScenarioParseError(where + ": expected an object");
  }
  return j;
}

double requireNumber(const json & obj, const char * key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ScenarioParseError(where + "." + key + ": missing required number");
  }
  if (!it->is_number()) {
    throw ScenarioParseError(where + "." + key + ": expected a number");
  }
  return it->get<double>();
}

std::optional<double> optionalNumber(const json & obj, const char * key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    return std::nullopt;
  }
  if (!it->is_number()) {
    throw ScenarioParseError(where + "." + key + ": expected a number");
  }
  return it->get<double>();
}

json toJson(const Scenario & s)
{
  json doc;
  const Environment & env = s.environment;
  doc["bounds"] = {{"x_min", env.x_min}, {"x_max", env.x_max}, {"y_min", env.y_min}, {"y_max", env.y_max}};
  doc["obstacles"] = json::array();
  for (const Rect & r : env.obstacles) {
    doc["obstacles"].push_back({{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}});
  }
  doc["waypoints"] = json::array();
  for (const Waypoint & wp : s.waypoints) {
    doc["waypoints"].push_back({{"x", wp.position.x()}, {"y", wp.position.y()}, {"reward", wp.reward}});
  }
  doc["fixed_end"] = s.fixed_end;
  json c = {{"v_max", s.constraints.v_max}, {"v_min", s.constraints.v_min}};
  if (s.constraints.t_max) c["t_max"] = *s.constraints.t_max;
  if (s.constraints.d_max) c["d_max"] = *s.constraints.d_max;
  if (s.constraints.omega_max) c["omega_max"] = *s.constraints.omega_max;
  if (s.constraints.accel_max) c["accel_max"] = *s.constraints.accel_max;
  doc["constraints"] = c;
  doc["model"] = s.model == RobotModel::DifferentialDrive ? "diffdrive" : "quadruped";
  if (s.model_params) {
    doc["model_params"] = {{"r", s.model_params->wheel_radius}, {"d_v", s.model_params->track_width}};
  }
  doc["grid"] = {{"resolution", s.grid_resolution}, {"inflation", s.inflation_radius}};
  return doc;
}

}  // namespace

Scenario loadScenario(std::string_view text)
{
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error & e) {
    throw ScenarioParseError("scenario parse error at " + lineContext(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                             e.what());
  }
  requireObject(doc, "scenario");
  rejectUnknown(doc, {"bounds", "obstacles", "waypoints", "fixed_end", "constraints", "model", "model_params", "grid"},
                "scenario");

  Scenario s;
  if (!doc.contains("bounds")) {
    throw ScenarioParseError("scenario.bounds: missing required object");
  }
  const json & b = requireObject(doc["bounds"], "bounds");
  rejectUnknown(b, {"x_min", "x_max", "y_min", "y_max"}, "bounds");
  s.environment.x_min = requireNumber(b, "x_min", "bounds");
  s.environment.x_max = requireNumber(b, "x_max", "bounds");
  s.environment.y_min = requireNumber(b, "y_min", "bounds");
  s.environment.y_max = requireNumber(b, "y_max", "bounds");

  if (doc.contains("obstacles")) {
    if (!doc["obstacles"].is_array()) {
      throw ScenarioParseError("obstacles: expected an array");
    }
    for (std::size_t k = 0; k < doc["obstacles"].size(); ++k) {
      const std::string where = "obstacles[" + std::to_string(k) + "]";
      const json & o = requireObject(doc["obstacles"][k], where);
      rejectUnknown(o, {"x", "y", "w", "h"}, where);
      s.environment.obstacles.push_back(
        {requireNumber(o, "x", where), requireNumber(o, "y", where), requireNumber(o, "w", where),
         requireNumber(o, "h", where)});
    }
  }

  if (!doc.contains("waypoints") || !doc["waypoints"].is_array()) {
    throw ScenarioParseError("waypoints: missing required array");
  }
  for (std::size_t k = 0; k < doc["waypoints"].size(); ++k) {
    const std::string where = "waypoints[" + std::to_string(k) + "]";
    const json & w = requireObject(doc["waypoints"][k], where);
    rejectUnknown(w, {"x", "y", "reward"}, where);
    Waypoint wp;
    wp.position = {requireNumber(w, "x", where), requireNumber(w, "y", where)};
    wp.reward = optionalNumber(w, "reward", where).value_or(0.0);
    s.waypoints.push_back(wp);
  }

  if (doc.contains("fixed_end")) {
    if (!doc["fixed_end"].is_boolean()) {
      throw ScenarioParseError("fixed_end: expected a boolean");
    }
    s.fixed_end = doc["fixed_end"].get<bool>();
  }

  if (!doc.contains("constraints")) {
    throw ScenarioParseError("constraints: missing required object");
  }
  const json & c = requireObject(doc["constraints"], "constraints");
  rejectUnknown(c, {"t_max", "d_max", "v_max", "v_min", "omega_max", "accel_max"}, "constraints");
  s.constraints.t_max = optionalNumber(c, "t_max", "constraints");
  s.constraints.d_max = optionalNumber(c, "d_max", "constraints");
  s.constraints.v_max = requireNumber(c, "v_max", "constraints");
  s.constraints.v_min = optionalNumber(c, "v_min", "constraints").value_or(0.0);
  s.constraints.omega_max = optionalNumber(c, "omega_max", "constraints");
  s.constraints.accel_max = optionalNumber(c, "accel_max", "constraints");

  if (doc.contains("model")) {
    if (!doc["model"].is_string()) {
      throw ScenarioParseError("model: expected a string");
    }
    const std::string model = doc["model"].get<std::string>();
    if (model == "diffdrive") {
      s.model = RobotModel::DifferentialDrive;
    } else if (model == "quadruped") {
      s.model = RobotModel::Quadruped;
    } else {
      throw ScenarioParseError("model: expected \"diffdrive\" or \"quadruped\", got \"" + model + "\"");
    }
  }

  if (doc.contains("model_params")) {
    const json & mp = requireObject(doc["model_params"], "model_params");
    rejectUnknown(mp, {"r", "d_v"}, "model_params");
    const auto r = optionalNumber(mp, "r", "model_params");
    const auto dv = optionalNumber(mp, "d_v", "model_params");
    if (r || dv) {
      if (!(r && dv)) {
        throw ScenarioParseError("model_params: r and d_v must be given together");
      }
      s.model_params = DiffDriveParams{*r, *dv};
    }
  }

  if (doc.contains("grid")) {
    const json & g = requireObject(doc["grid"], "grid");
    rejectUnknown(g, {"resolution", "inflation"}, "grid");
    s.grid_resolution = optionalNumber(g, "resolution", "grid").value_or(kDefaultGridResolution);
    s.inflation_radius = optionalNumber(g, "inflation", "grid").value_or(0.0);
  }

  const auto findings = validate(s);
  if (!findings.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto & f : findings) {
      msg += "\n  " + f;
    }
    throw ScenarioValidationError(msg);
  }
  return s;
}

Scenario loadScenarioFile(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return loadScenario(buf.str());
}

std::string saveScenario(const Scenario & scenario)
{
  return toJson(scenario).dump(2);
}

std::string scenarioDigest(const Scenario & scenario)
{
  const std::string canon = toJson(scenario).dump();
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : canon) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace rewardroute
