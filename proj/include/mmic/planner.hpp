// Copyright 2026 The mmic Authors.
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

#include <functional>

#include "mmic/robot_core.hpp"

namespace mmic {

/// Minimum-jerk phase 10u^3 - 15u^4 + 6u^5, u = (t - t_i) / T_rec clamped
/// to [0, 1].
double phase(double t, double t_i, double T_rec);
/// d(phase)/dt.
double phase_rate(double t, double t_i, double T_rec);
/// d^2(phase)/dt^2.
double phase_accel(double t, double t_i, double T_rec);

/// Spherical linear interpolation along the shorter arc. Falls back to
/// normalized linear interpolation when the arc is below 1e-6 rad.
Quat slerp(const Quat& r0, const Quat& r1, double u);

/// Recontact plan from the pose held when recovery started towards a
/// possibly moving target.
struct MinJerkPlan {
  double t_i = 0.0;
  double T_rec = 8.0;
  Pose x_i;
  std::function<Pose(double)> target_provider;

  MinJerkPlan() = default;
  MinJerkPlan(double start, double duration, const Pose& initial,
              std::function<Pose(double)> target);
};

/// Position x_i + phi (p_f - p_i); orientation slerp(r_i, r_f, phi).
Pose plan_pose(const MinJerkPlan& plan, double t);

/// Linear part phi' (p_f - p_i); angular part zero.
Twist plan_velocity(const MinJerkPlan& plan, double t);

/// Linear part phi'' (p_f - p_i); angular part zero.
Twist plan_acceleration(const MinJerkPlan& plan, double t);

}  // namespace mmic
