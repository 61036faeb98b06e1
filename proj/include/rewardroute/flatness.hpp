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

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rewardroute/clothoid.hpp"
#include "rewardroute/scenario.hpp"

namespace rewardroute
{

/// Flat outputs y = (x1, x2) and their first two time derivatives.
struct FlatSample
{
  double t = 0.0;
  Point2 y = Point2::Zero();
  Eigen::Vector2d y_dot = Eigen::Vector2d::Zero();
  Eigen::Vector2d y_ddot = Eigen::Vector2d::Zero();
  double theta = 0.0;
  double theta_dot = 0.0;
};

using FlatTrace = std::vector<FlatSample>;

/// Diffdrive: x = (x1, x2, x3), u = (v, omega, 0).
/// Quadruped: x = (x1, x2, theta), u = body velocities (u1, u2, omega).
struct StateInputSample
{
  double t = 0.0;
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  double u1_dot = 0.0;
  /// Left and right wheel angular speeds when wheel parameters are known.
  std::optional<Eigen::Vector2d> wheels;
};

struct StateInputTrace
{
  RobotModel model = RobotModel::DifferentialDrive;
  std::vector<StateInputSample> samples;
};

class ZeroSpeedSampleError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DegenerateVelocityError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class ZeroInputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDegenerateSpeed = 1e-9;

FlatTrace flatTraceFromTrajectory(const Trajectory & trajectory);

StateInputTrace diffdriveForward(const FlatTrace & flat, const std::optional<DiffDriveParams> & params = std::nullopt);

/// Sign of the u1*u2*cos(x3) term in the second acceleration component.
enum class InverseVariant
{
  /// Exact inverse of diffdriveForward (+u1 u2 cos x3).
  Consistent,
  /// Transcribed form with -u1 u2 cos x3; not an inverse when u2 != 0.
  Transcribed
};

FlatTrace diffdriveInverse(const StateInputTrace & trace, InverseVariant variant = InverseVariant::Consistent);

/// Body velocities R(theta) [x1', x2', theta'] + theta' M(theta) [x1, x2, theta].
/// With standard_body_twist the map is R(theta)^T [x1', x2'] and omega = theta'.
StateInputTrace quadrupedForward(const FlatTrace & flat, bool standard_body_twist = false);

Eigen::Matrix3d quadrupedRotation(double theta);
Eigen::Matrix3d quadrupedCoupling(double theta);

/// (left, right) wheel angular speeds for body speed v and yaw rate omega.
Eigen::Vector2d wheelSpeeds(double v, double omega, const DiffDriveParams & params);
/// Inverse of wheelSpeeds: (v, omega).
Eigen::Vector2d bodySpeeds(const Eigen::Vector2d & wheels, const DiffDriveParams & params);

/// Unicycle dynamics x' = (u1 cos x3, u1 sin x3, u2).
Eigen::Vector3d diffdriveDynamics(const Eigen::Vector3d & x, const Eigen::Vector2d & u);

/// Diffdrive: `t,x1,x2,x3,u1,u2,u1_dot[,wL,wR]`. Quadruped: `t,x1,x2,x3,u1,u2,u3`.
void writeStatesCsv(std::ostream & out, const StateInputTrace & trace);

}  // namespace rewardroute
