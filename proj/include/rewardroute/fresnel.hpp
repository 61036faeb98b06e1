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

#include <array>

namespace rewardroute
{

/// Normalized Fresnel integrals C(x) = int_0^x cos(pi/2 t^2) dt and S(x).
struct FresnelCS
{
  double c = 0.0;
  double s = 0.0;
};

FresnelCS fresnel(double x);

/// Moments X_k = int_0^1 t^k cos(a/2 t^2 + b t + c) dt and the matching sine
/// moments Y_k, for k = 0, 1, 2.
struct FresnelMoments
{
  std::array<double, 3> x{};
  std::array<double, 3> y{};
};

FresnelMoments generalizedFresnel(double a, double b, double c);
/// Only the first `moments` entries (1..3) are guaranteed filled.
FresnelMoments generalizedFresnel(double a, double b, double c, int moments);

}  // namespace rewardroute
