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

#include "rewardroute/clothoid.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <mutex>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "rewardroute/fresnel.hpp"

namespace rewardroute
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr int kNewtonCap = 100;
constexpr double kFitTolerance = 1e-8;
constexpr double kStraightEps = 1e-14;

// Initial guess for the G1 root in the scaled curvature-rate parameter; a
// rational fit of the solution over (phi0, phi1) in [-pi, pi]^2.
double guessCurvatureRate(double phi0, double phi1)
{
  constexpr double cf[] = {2.989696028701907, 0.716228953608281, -0.458969738821509,
                           -0.502821153340377, 0.261062141752652, -0.045854475238709};
  double x = phi0 / kPi;
  double y = phi1 / kPi;
  const double xy = x * y;
  x *= x;
  y *= y;
  return (phi0 + phi1) * (cf[0] + xy * (cf[1] + xy * cf[2]) + (cf[3] + xy * cf[4]) * (x + y) + cf[5] * (x * x + y * y));
}

}  // namespace

PathPose ClothoidSegment::eval(double s) const
{
  PathPose pose;
  pose.heading = headingAt(s);
  pose.curvature = curvatureAt(s);
  if (kappa0 == 0.0 && kappa_rate == 0.0) {
    pose.position = start + s * Point2(std::cos(theta0), std::sin(theta0));
    return pose;
  }
  const FresnelMoments m = generalizedFresnel(kappa_rate * s * s, kappa0 * s, theta0, 1);
  pose.position = start + s * Point2(m.x[0], m.y[0]);
  return pose;
}

PathPose ClothoidSegment::advance(const PathPose & from, double s_from, double s) const
{
  PathPose pose;
  pose.heading = headingAt(s);
  pose.curvature = curvatureAt(s);
  const double h = s - s_from;
  const FresnelMoments m = generalizedFresnel(kappa_rate * h * h, from.curvature * h, from.heading, 1);
  pose.position = from.position + h * Point2(m.x[0], m.y[0]);
  return pose;
}

ClothoidSegment fitG1(const Point2 & p0, double theta0, const Point2 & p1, double theta1)
{
  const Point2 d = p1 - p0;
  const double r = d.norm();
  if (!(r > 0.0)) {
    throw std::invalid_argument("fitG1: endpoints coincide");
  }
  const double phi = std::atan2(d.y(), d.x());
  const double phi0 = wrapAngle(theta0 - phi);
  const double phi1 = wrapAngle(theta1 - phi);
  const double delta = phi1 - phi0;

  ClothoidSegment seg;
  seg.start = p0;
  seg.theta0 = theta0;
  if (std::abs(phi0) < kStraightEps && std::abs(phi1) < kStraightEps) {
    seg.length = r;
    return seg;
  }

  // Root of Y(2A, delta - A, phi0) in A; the derivative is X_2 - X_1.
  double a = guessCurvatureRate(phi0, phi1);
  FresnelMoments m = generalizedFresnel(2.0 * a, delta - a, phi0);
  bool converged = false;
  for (int iter = 0; iter < kNewtonCap; ++iter) {
    const double g = m.y[0];
    if (std::abs(g) < 1e-14) {
      converged = true;
      break;
    }
    const double dg = m.x[2] - m.x[1];
    if (dg == 0.0 || !std::isfinite(dg)) {
      break;
    }
    double step = g / dg;
    double trial = a - step;
    FresnelMoments mt = generalizedFresnel(2.0 * trial, delta - trial, phi0);
    for (int halving = 0; halving < 30 && !(std::abs(mt.y[0]) < std::abs(g)); ++halving) {
      step *= 0.5;
      trial = a - step;
      mt = generalizedFresnel(2.0 * trial, delta - trial, phi0);
    }
    const bool stalled = std::abs(a - trial) <= 1e-15 * (1.0 + std::abs(a));
    a = trial;
    m = mt;
    if (stalled) {
      converged = std::abs(m.y[0]) < 1e-10;
      break;
    }
  }

  const double chord = m.x[0];
  if (!converged || !(chord > 0.0)) {
    throw ClothoidFitError("fitG1: Newton iteration did not converge", std::abs(m.y[0]));
  }
  seg.length = r / chord;
  seg.kappa0 = (delta - a) / seg.length;
  seg.kappa_rate = 2.0 * a / (seg.length * seg.length);

  const PathPose end = seg.eval(seg.length);
  const double residual = std::max((end.position - p1).norm(), std::abs(wrapAngle(end.heading - theta1)));
  if (!(residual <= kFitTolerance)) {
    throw ClothoidFitError("fitG1: endpoint residual above tolerance", residual);
  }
  return seg;
}

std::vector<double> assignHeadings(std::span<const Point2> polyline, std::optional<double> initial_heading)
{
  const std::size_t n = polyline.size();
  if (n < 2) {
    throw std::invalid_argument("assignHeadings: polyline needs at least two points");
  }
  std::vector<Point2> dirs(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Point2 d = polyline[k + 1] - polyline[k];
    const double len = d.norm();
    if (!(len > 0.0)) {
      throw std::invalid_argument("assignHeadings: consecutive points coincide");
    }
    dirs[k] = d / len;
  }
  std::vector<double> headings(n);
  headings[0] = initial_heading.value_or(std::atan2(dirs[0].y(), dirs[0].x()));
  headings[n - 1] = std::atan2(dirs[n - 2].y(), dirs[n - 2].x());
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Point2 sum = dirs[k - 1] + dirs[k];
    if (sum.norm() < 1e-9) {
      headings[k] = wrapAngle(std::atan2(dirs[k - 1].y(), dirs[k - 1].x()) + 0.5 * kPi);
    } else {
      headings[k] = std::atan2(sum.y(), sum.x());
    }
  }
  return headings;
}

double PiecewiseClothoid::length() const
{
  double total = 0.0;
  for (const auto & seg : segments) {
    total += seg.length;
  }
  return total;
}

PathPose PiecewiseClothoid::sample(double s) const
{
  const double total = length();
  if (segments.empty() || s < -1e-12 || s > total + 1e-9) {
    throw std::out_of_range("PiecewiseClothoid::sample: arc length outside [0, length]");
  }
  double offset = std::max(s, 0.0);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (offset <= segments[k].length || k + 1 == segments.size()) {
      return segments[k].eval(std::min(offset, segments[k].length));
    }
    offset -= segments[k].length;
  }
  return segments.back().eval(segments.back().length);
}

PiecewiseClothoid buildPath(
  std::span<const Point2> polyline, std::span<const double> headings, std::span<const std::size_t> knot_indices)
{
  if (knot_indices.size() < 2) {
    throw std::invalid_argument("buildPath: at least two knots are required");
  }
  PiecewiseClothoid path;
  path.knot_indices.assign(knot_indices.begin(), knot_indices.end());
  for (std::size_t idx : knot_indices) {
    path.knots.push_back(polyline[idx]);
    path.knot_headings.push_back(headings[idx]);
  }
  path.segments.reserve(knot_indices.size() - 1);
  for (std::size_t k = 0; k + 1 < knot_indices.size(); ++k) {
    try {
      path.segments.push_back(
        fitG1(path.knots[k], path.knot_headings[k], path.knots[k + 1], path.knot_headings[k + 1]));
    } catch (const ClothoidFitError & e) {
      throw ClothoidFitError(
        std::string(e.what()) + " (knot pair " + std::to_string(k) + ")", e.residual(), k);
    }
  }
  return path;
}

PiecewiseClothoid buildPath(std::span<const Point2> polyline, std::optional<double> initial_heading)
{
  const std::vector<double> headings = assignHeadings(polyline, initial_heading);
  std::vector<std::size_t> knots(polyline.size());
  for (std::size_t k = 0; k < knots.size(); ++k) {
    knots[k] = k;
  }
  return buildPath(polyline, headings, knots);
}

std::vector<std::size_t> cornerKnots(std::span<const Point2> polyline, std::span<const std::size_t> extra)
{
  std::vector<std::size_t> knots;
  const std::size_t n = polyline.size();
  if (n == 0) {
    return knots;
  }
  knots.push_back(0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Point2 a = (polyline[k] - polyline[k - 1]).normalized();
    const Point2 b = (polyline[k + 1] - polyline[k]).normalized();
    const double cross = a.x() * b.y() - a.y() * b.x();
    if (std::abs(cross) > 1e-9 || a.dot(b) < 0.0) {
      knots.push_back(k);
    }
  }
  knots.push_back(n - 1);
  knots.insert(knots.end(), extra.begin(), extra.end());
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  return knots;
}

bool segmentIsFree(const ClothoidSegment & segment, const OccupancyGrid & grid)
{
  const double step = 0.5 * grid.resolution();
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(segment.length / step)));
  PathPose pose = segment.eval(0.0);
  double prev = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = segment.length * static_cast<double>(i) / static_cast<double>(n);
    pose = segment.advance(pose, prev, s);
    prev = s;
    if (!isFree(grid, pose.position)) {
      return false;
    }
  }
  return true;
}

std::size_t SegmentFreeCache::KeyHash::operator()(const Key & k) const
{
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (double v : k) {
    h ^= std::bit_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

bool SegmentFreeCache::isFree(const ClothoidSegment & segment, const OccupancyGrid & grid)
{
  const Key key = {segment.start.x(), segment.start.y(), segment.theta0,
                   segment.kappa0,    segment.kappa_rate, segment.length};
  {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(key);
    if (it != entries_.end()) {
      return it->second;
    }
  }
  const bool free = segmentIsFree(segment, grid);
  std::unique_lock lock(mutex_);
  entries_.emplace(key, free);
  return free;
}

std::size_t SegmentFreeCache::size() const
{
  std::shared_lock lock(mutex_);
  return entries_.size();
}

RefineResult refineCollision(
  const PiecewiseClothoid & path, std::span<const Point2> polyline, const OccupancyGrid & grid,
  SegmentFreeCache * cache)
{
  RefineResult result{path, 0};
  PiecewiseClothoid & out = result.path;
  std::vector<double> vertex_headings;

  std::size_t k = 0;
  while (k < out.segments.size()) {
    const std::size_t ia = out.knot_indices[k];
    const std::size_t ib = out.knot_indices[k + 1];
    if (ib - ia < 2 || (cache ? cache->isFree(out.segments[k], grid) : segmentIsFree(out.segments[k], grid))) {
      ++k;
      continue;
    }
    if (vertex_headings.empty()) {
      vertex_headings = assignHeadings(polyline);
    }
    const std::size_t mid = ia + (ib - ia) / 2;
    const double mid_heading = vertex_headings[mid];
    const ClothoidSegment first = fitG1(out.knots[k], out.knot_headings[k], polyline[mid], mid_heading);
    const ClothoidSegment second = fitG1(polyline[mid], mid_heading, out.knots[k + 1], out.knot_headings[k + 1]);
    out.segments[k] = first;
    out.segments.insert(out.segments.begin() + static_cast<std::ptrdiff_t>(k) + 1, second);
    out.knot_indices.insert(out.knot_indices.begin() + static_cast<std::ptrdiff_t>(k) + 1, mid);
    out.knots.insert(out.knots.begin() + static_cast<std::ptrdiff_t>(k) + 1, polyline[mid]);
    out.knot_headings.insert(out.knot_headings.begin() + static_cast<std::ptrdiff_t>(k) + 1, mid_heading);
    ++result.insertions;
  }
  return result;
}

std::size_t defaultSampleCount(double path_length, double resolution)
{
  const double needed = std::ceil(2.0 * path_length / resolution) + 1.0;
  return std::max<std::size_t>(100, static_cast<std::size_t>(needed));
}

Trajectory parameterizeTime(
  const PiecewiseClothoid & path, const ConstraintSet & constraints, std::size_t sample_count,
  const TimingOptions & options)
{
  if (sample_count < 2) {
    throw std::invalid_argument("parameterizeTime: sample_count must be at least 2");
  }
  if (constraints.v_min > constraints.v_max) {
    throw InfeasibleSpeedBandError("parameterizeTime: v_min exceeds v_max");
  }
  const double total = path.length();
  if (!(total > 0.0)) {
    throw std::invalid_argument("parameterizeTime: path has zero length");
  }

  Trajectory traj;
  traj.total_length = total;
  double t_f = 0.0;
  double v = 0.0;
  if (constraints.t_max) {
    t_f = *constraints.t_max;
    v = total / t_f;
  } else {
    v = options.cruise_fraction * constraints.v_max;
    t_f = total / v;
  }
  if (v < constraints.v_min) {
    while (total / t_f < constraints.v_min) {
      t_f *= options.time_reduction;
      ++traj.time_reductions;
    }
    v = constraints.v_min;
    t_f = total / v;
  }
  if (v > constraints.v_max) {
    v = constraints.v_max;
    t_f = total / v;
  }
  traj.cruise_speed = v;
  traj.t_f = t_f;

  traj.samples.reserve(sample_count);
  std::size_t seg = 0;
  double seg_start = 0.0;
  PathPose pose = path.segments[0].eval(0.0);
  double prev = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double s = total * static_cast<double>(i) / static_cast<double>(sample_count - 1);
    while (seg + 1 < path.segments.size() && s > seg_start + path.segments[seg].length) {
      seg_start += path.segments[seg].length;
      ++seg;
      pose = path.segments[seg].eval(0.0);
      prev = 0.0;
    }
    const double local = std::clamp(s - seg_start, 0.0, path.segments[seg].length);
    pose = path.segments[seg].advance(pose, prev, local);
    prev = local;
    TrajectorySample sample;
    sample.t = i + 1 == sample_count ? t_f : s / v;
    sample.position = pose.position;
    sample.heading = pose.heading;
    sample.curvature = pose.curvature;
    sample.speed = v;
    sample.accel = 0.0;
    traj.samples.push_back(sample);
  }
  return traj;
}

void writeTrajectoryCsv(std::ostream & out, const Trajectory & trajectory)
{
  out << "t,x,y,theta,kappa,v,a_lat\n";
  char line[256];
  for (const auto & s : trajectory.samples) {
    std::snprintf(
      line, sizeof(line), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", s.t, s.position.x(), s.position.y(), s.heading,
      s.curvature, s.speed, s.lateralAccel());
    out << line;
  }
}

}  // namespace rewardroute
