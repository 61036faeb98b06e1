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

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace rewardroute
{

using Point2 = Eigen::Vector2d;

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrapAngle(Scalar a)
{
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  a = std::remainder(a, Scalar(2) * pi);
  if (a <= -pi) {
    a += Scalar(2) * pi;
  }
  return a;
}

inline double bearing(const Point2 & from, const Point2 & to)
{
  const Point2 d = to - from;
  return std::atan2(d.y(), d.x());
}

}  // namespace rewardroute
