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

#include "rewardroute/flatness.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace rewardroute
{

FlatTrace flatTraceFromTrajectory(const Trajectory & trajectory)
{
  FlatTrace flat;
  flat.reserve(trajectory.samples.size());
  for (const TrajectorySample & s : trajectory.samples) {
    if (!(s.speed > 0.0)) {
      throw ZeroSpeedSampleError("trajectory sample at t=" + std::to_string(s.t) + " has nonpositive speed");
    }
    const Eigen::Vector2d tangent(std::cos(s.heading), std::sin(s.heading));
    const Eigen::Vector2d normal(-tangent.y(), tangent.x());
    FlatSample f;
    f.t = s.t;
    f.y = s.position;
    f.y_dot = s.speed * tangent;
    f.y_ddot = s.accel * tangent + s.speed * s.speed * s.curvature * normal;
    f.theta = s.heading;
    f.theta_dot = s.speed * s.curvature;
    flat.push_back(f);
  }
  return flat;
}

StateInputTrace diffdriveForward(const FlatTrace & flat, const std::optional<DiffDriveParams> & params)
{
  StateInputTrace out;
  out.model = RobotModel::DifferentialDrive;
  out.samples.reserve(flat.size());
  for (const FlatSample & f : flat) {
    const double speed2 = f.y_dot.squaredNorm();
    const double speed = std::sqrt(speed2);
    if (speed < kDegenerateSpeed) {
      throw DegenerateVelocityError("flat output velocity vanishes at t=" + std::to_string(f.t));
    }
    StateInputSample s;
    s.t = f.t;
    s.x << f.y.x(), f.y.y(), std::atan2(f.y_dot.y(), f.y_dot.x());
    const double cross = f.y_dot.x() * f.y_ddot.y() - f.y_ddot.x() * f.y_dot.y();
    s.u << speed, cross / speed2, 0.0;
    s.u1_dot = f.y_dot.dot(f.y_ddot) / speed;
    if (params) {
      s.wheels = wheelSpeeds(s.u[0], s.u[1], *params);
    }
    out.samples.push_back(s);
  }
  return out;
}

FlatTrace diffdriveInverse(const StateInputTrace & trace, InverseVariant variant)
{
  const double sign = variant == InverseVariant::Consistent ? 1.0 : -1.0;
  FlatTrace flat;
  flat.reserve(trace.samples.size());
  for (const StateInputSample & s : trace.samples) {
    const double u1 = s.u[0];
    const double u2 = s.u[1];
    if (u1 == 0.0) {
      throw ZeroInputError("u1 vanishes at t=" + std::to_string(s.t));
    }
    const double c = std::cos(s.x[2]);
    const double sn = std::sin(s.x[2]);
    FlatSample f;
    f.t = s.t;
    f.y = s.x.head<2>();
    f.y_dot << u1 * c, u1 * sn;
    f.y_ddot << s.u1_dot * c - u1 * u2 * sn, s.u1_dot * sn + sign * u1 * u2 * c;
    f.theta = s.x[2];
    f.theta_dot = u2;
    flat.push_back(f);
  }
  return flat;
}

Eigen::Matrix3d quadrupedRotation(double theta)
{
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix3d r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

Eigen::Matrix3d quadrupedCoupling(double theta)
{
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix3d m;
  m << -s, -c, 0.0,
       c, -s, 0.0,
       0.0, 0.0, 0.0;
  return m;
}

StateInputTrace quadrupedForward(const FlatTrace & flat, bool standard_body_twist)
{
  StateInputTrace out;
  out.model = RobotModel::Quadruped;
  out.samples.reserve(flat.size());
  for (const FlatSample & f : flat) {
    StateInputSample s;
    s.t = f.t;
    s.x << f.y.x(), f.y.y(), f.theta;
    const Eigen::Vector3d rates(f.y_dot.x(), f.y_dot.y(), f.theta_dot);
    if (standard_body_twist) {
      const Eigen::Matrix2d r = quadrupedRotation(f.theta).topLeftCorner<2, 2>();
      s.u << r.transpose() * f.y_dot, f.theta_dot;
    } else {
      s.u = quadrupedRotation(f.theta) * rates + f.theta_dot * quadrupedCoupling(f.theta) * s.x;
    }
    out.samples.push_back(s);
  }
  return out;
}

Eigen::Vector2d wheelSpeeds(double v, double omega, const DiffDriveParams & params)
{
  const double r = params.wheel_radius;
  const double d = params.track_width;
  return {(2.0 * v - omega * d) / (2.0 * r), (2.0 * v + omega * d) / (2.0 * r)};
}

Eigen::Vector2d bodySpeeds(const Eigen::Vector2d & wheels, const DiffDriveParams & params)
{
  const double r = params.wheel_radius;
  const double d = params.track_width;
  return {0.5 * r * (wheels.x() + wheels.y()), r * (wheels.y() - wheels.x()) / d};
}

Eigen::Vector3d diffdriveDynamics(const Eigen::Vector3d & x, const Eigen::Vector2d & u)
{
  return {u[0] * std::cos(x[2]), u[0] * std::sin(x[2]), u[1]};
}

void writeStatesCsv(std::ostream & out, const StateInputTrace & trace)
{
  const bool diffdrive = trace.model == RobotModel::DifferentialDrive;
  const bool wheels = diffdrive && !trace.samples.empty() && trace.samples.front().wheels.has_value();
  out << (diffdrive ? "t,x1,x2,x3,u1,u2,u1_dot" : "t,x1,x2,x3,u1,u2,u3") << (wheels ? ",wL,wR\n" : "\n");
  char buf[64];
  auto put = [&](double v, bool last) {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out << buf << (last ? '\n' : ',');
  };
  for (const StateInputSample & s : trace.samples) {
    put(s.t, false);
    put(s.x[0], false);
    put(s.x[1], false);
    put(s.x[2], false);
    put(s.u[0], false);
    put(s.u[1], false);
    put(diffdrive ? s.u1_dot : s.u[2], !wheels);
    if (wheels) {
      put(s.wheels->x(), false);
      put(s.wheels->y(), true);
    }
  }
}

}  // namespace rewardroute
