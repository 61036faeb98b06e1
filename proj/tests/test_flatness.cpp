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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rewardroute/flatness.hpp"

using namespace rewardroute;

namespace
{

constexpr double kPi = std::numbers::pi;

// Analytic circle of radius r traversed at angular rate w, counterclockwise.
FlatSample circleSample(double r, double w, double t)
{
  FlatSample f;
  f.t = t;
  f.y << r * std::cos(w * t), r * std::sin(w * t);
  f.y_dot << -r * w * std::sin(w * t), r * w * std::cos(w * t);
  f.y_ddot << -r * w * w * std::cos(w * t), -r * w * w * std::sin(w * t);
  f.theta = w * t + kPi / 2;
  f.theta_dot = w;
  return f;
}

// Random five-point clothoid path timed so consecutive samples are dt apart.
Trajectory randomTrajectory(std::mt19937_64 & rng, double dt, PiecewiseClothoid * out = nullptr)
{
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::vector<Point2> poly{{u(rng), u(rng)}};
  for (int k = 0; k < 4; ++k) {
    Point2 next(u(rng), u(rng));
    while ((next - poly.back()).norm() < 0.5) next = Point2(u(rng), u(rng));
    poly.push_back(next);
  }
  ConstraintSet c;
  c.v_max = 1.0;
  std::uniform_real_distribution<double> tm(10.0, 40.0);
  const auto path = buildPath(poly);
  c.t_max = std::max(path.length(), std::round(tm(rng)));
  if (out != nullptr) {
    *out = path;
  }
  return parameterizeTime(path, c, static_cast<std::size_t>(std::llround(*c.t_max / dt)) + 1);
}

}  // namespace

TEST_CASE("flat trace of a straight constant-speed run")
{
  const std::vector<Point2> line = {{0, 0}, {5, 0}};
  ConstraintSet c;
  c.t_max = 5.0;
  const FlatTrace flat = flatTraceFromTrajectory(parameterizeTime(buildPath(line), c, 11));
  for (const auto & f : flat) {
    CHECK((f.y_dot - Eigen::Vector2d(1, 0)).norm() < 1e-15);
    CHECK(f.y_ddot.norm() < 1e-15);
  }
}

TEST_CASE("flat trace on a circle has centripetal acceleration v^2/R")
{
  PiecewiseClothoid circle;
  circle.segments.push_back(fitG1({2, 0}, kPi / 2, {0, 2}, kPi));
  ConstraintSet c;
  c.t_max = 2.0;
  const Trajectory t = parameterizeTime(circle, c, 50);
  const double v = t.cruise_speed;
  for (const auto & f : flatTraceFromTrajectory(t)) {
    CHECK(std::abs(f.y_ddot.norm() - v * v / 2.0) < 1e-6);
  }
}

TEST_CASE("stored velocity agrees with finite differences of position")
{
  std::mt19937_64 rng(4);
  const Trajectory t = randomTrajectory(rng, 1e-3);
  const FlatTrace flat = flatTraceFromTrajectory(t);
  for (std::size_t i = 1; i + 1 < flat.size(); ++i) {
    const double dt = flat[i + 1].t - flat[i - 1].t;
    const Eigen::Vector2d fd = (flat[i + 1].y - flat[i - 1].y) / dt;
    CHECK((fd - flat[i].y_dot).norm() < 1e-3);
  }
}

TEST_CASE("zero speed sample is rejected")
{
  Trajectory t;
  t.samples.resize(2);
  CHECK_THROWS_AS(flatTraceFromTrajectory(t), ZeroSpeedSampleError);
}

TEST_CASE("diffdrive forward map")
{
  FlatTrace flat(1);
  flat[0].y_dot << 0.7, 0.0;
  StateInputTrace s = diffdriveForward(flat);
  CHECK(s.samples[0].x[2] == 0.0);
  CHECK(s.samples[0].u[0] == doctest::Approx(0.7));
  CHECK(s.samples[0].u[1] == 0.0);
  CHECK(s.samples[0].u1_dot == 0.0);

  const double r = 1.7;
  const double w = 0.45;
  const StateInputTrace circ = diffdriveForward({circleSample(r, w, 0.3), circleSample(r, w, 2.1)});
  for (const auto & smp : circ.samples) {
    CHECK(std::abs(smp.u[0] - r * w) < 1e-12);
    CHECK(std::abs(smp.u[1] - w) < 1e-12);
  }

  FlatTrace still(1);
  CHECK_THROWS_AS(diffdriveForward(still), DegenerateVelocityError);
}

TEST_CASE("diffdrive inverse map")
{
  StateInputTrace t;
  t.samples.resize(1);
  t.samples[0].x << 0, 0, 0;
  t.samples[0].u << 0.8, 0, 0;
  FlatTrace f = diffdriveInverse(t);
  CHECK((f[0].y_dot - Eigen::Vector2d(0.8, 0)).norm() < 1e-15);
  CHECK(f[0].y_ddot.norm() < 1e-15);

  t.samples[0].x << 0, 0, kPi / 2;
  t.samples[0].u << 1, 0, 0;
  t.samples[0].u1_dot = 1.0;
  for (auto variant : {InverseVariant::Consistent, InverseVariant::Transcribed}) {
    f = diffdriveInverse(t, variant);
    CHECK((f[0].y_dot - Eigen::Vector2d(0, 1)).norm() < 1e-15);
    CHECK((f[0].y_ddot - Eigen::Vector2d(0, 1)).norm() < 1e-15);
  }

  t.samples[0].u[0] = 0.0;
  CHECK_THROWS_AS(diffdriveInverse(t), ZeroInputError);
}

TEST_CASE("diffdrive round trip")
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  FlatTrace flat;
  for (int i = 0; i < 500; ++i) {
    FlatSample f;
    f.t = 0.01 * i;
    f.y << u(rng), u(rng);
    f.y_dot << u(rng), u(rng);
    if (f.y_dot.norm() < 0.1) f.y_dot.x() += 0.5;
    f.y_ddot << u(rng), u(rng);
    flat.push_back(f);
  }
  const FlatTrace back = diffdriveInverse(diffdriveForward(flat));
  for (std::size_t i = 0; i < flat.size(); ++i) {
    CHECK((back[i].y - flat[i].y).norm() < 1e-9);
    CHECK((back[i].y_dot - flat[i].y_dot).norm() < 1e-9);
    CHECK((back[i].y_ddot - flat[i].y_ddot).norm() < 1e-9);
  }

  // The transcribed variant breaks the round trip as soon as the robot turns.
  const FlatTrace bad = diffdriveInverse(diffdriveForward({circleSample(1.0, 1.0, 0.5)}), InverseVariant::Transcribed);
  CHECK((bad[0].y_ddot - circleSample(1.0, 1.0, 0.5).y_ddot).norm() > 0.5);
}

TEST_CASE("diffdrive states satisfy the unicycle dynamics")
{
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    PiecewiseClothoid path;
    const Trajectory t = randomTrajectory(rng, 1e-3, &path);
    const StateInputTrace s = diffdriveForward(flatTraceFromTrajectory(t));
    // Knot times; the heading rate jumps there.
    std::vector<double> knots;
    double along = 0.0;
    for (const auto & seg : path.segments) {
      along += seg.length;
      knots.push_back(along / t.cruise_speed);
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 1; i + 1 < s.samples.size(); ++i) {
      const auto & prev = s.samples[i - 1];
      const auto & next = s.samples[i + 1];
      if (std::any_of(knots.begin(), knots.end(), [&](double k) { return prev.t < k && k < next.t; })) {
        continue;
      }
      const double dt = next.t - prev.t;
      Eigen::Vector3d fd = (next.x - prev.x) / dt;
      fd[2] = wrapAngle(next.x[2] - prev.x[2]) / dt;
      sum += (fd - diffdriveDynamics(s.samples[i].x, s.samples[i].u.head<2>())).squaredNorm();
      ++count;
    }
    CHECK(std::sqrt(sum / count) <= 1e-3);
  }
}

TEST_CASE("wheel speed map is a bijection")
{
  const DiffDriveParams p{0.033, 0.16};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double v = u(rng);
    const double w = 3.0 * u(rng);
    const Eigen::Vector2d wheels = wheelSpeeds(v, w, p);
    const Eigen::Vector2d back = bodySpeeds(wheels, p);
    CHECK(std::abs(back[0] - v) < 1e-12);
    CHECK(std::abs(back[1] - w) < 1e-12);
  }
  const Eigen::Vector2d straight = wheelSpeeds(0.33, 0.0, p);
  CHECK(straight[0] == doctest::Approx(10.0));
  CHECK(straight[1] == doctest::Approx(10.0));
}

TEST_CASE("quadruped map")
{
  FlatSample f;
  f.y_dot << 0.6, 0.0;
  CHECK((quadrupedForward({f}).samples[0].u - Eigen::Vector3d(0.6, 0, 0)).norm() < 1e-15);

  f.theta = kPi / 2;
  CHECK((quadrupedForward({f}).samples[0].u - Eigen::Vector3d(0, 0.6, 0)).norm() < 1e-15);

  FlatSample g;
  g.y << 1, 0;
  g.theta = 0.0;
  g.theta_dot = 1.0;
  g.y_dot << 0, 0;
  // R(0) [0, 0, 1] = (0, 0, 1); 1 * M(0) [1, 0, 0] = (0, 1, 0).
  CHECK((quadrupedForward({g}).samples[0].u - Eigen::Vector3d(0, 1, 1)).norm() < 1e-15);

  // Standard body twist: a robot facing +y moving along +x slides to its right.
  f.theta = kPi / 2;
  const Eigen::Vector3d body = quadrupedForward({f}, true).samples[0].u;
  CHECK((body - Eigen::Vector3d(0, -0.6, 0)).norm() < 1e-15);
}

TEST_CASE("states CSV")
{
  FlatTrace flat(1);
  flat[0].y_dot << 1.0, 0.0;
  std::ostringstream a;
  writeStatesCsv(a, diffdriveForward(flat, DiffDriveParams{0.5, 1.0}));
  CHECK(a.str() == "t,x1,x2,x3,u1,u2,u1_dot,wL,wR\n0,0,0,0,1,0,0,2,2\n");
  std::ostringstream b;
  writeStatesCsv(b, quadrupedForward(flat));
  CHECK(b.str() == "t,x1,x2,x3,u1,u2,u3\n0,0,0,0,1,0,0\n");
}
