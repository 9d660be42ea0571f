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

#include "mmic/planner.hpp"

#include <algorithm>
#include <cmath>

namespace mmic {

namespace {

double normalized_time(double t, double t_i, double T_rec) {
  if (!(T_rec > 0.0)) throw ContractViolation("recovery duration must be positive");
  return std::clamp((t - t_i) / T_rec, 0.0, 1.0);
}

bool inside(double t, double t_i, double T_rec) {
  return t > t_i && t < t_i + T_rec;
}

}  // namespace

double phase(double t, double t_i, double T_rec) {
  const double u = normalized_time(t, t_i, T_rec);
  const double u3 = u * u * u;
  return u3 * (10.0 - 15.0 * u + 6.0 * u * u);
}

double phase_rate(double t, double t_i, double T_rec) {
  const double u = normalized_time(t, t_i, T_rec);
  if (!inside(t, t_i, T_rec)) return 0.0;
  const double u2 = u * u;
  return 30.0 * u2 * (1.0 - 2.0 * u + u2) / T_rec;
}

double phase_accel(double t, double t_i, double T_rec) {
  const double u = normalized_time(t, t_i, T_rec);
  if (!inside(t, t_i, T_rec)) return 0.0;
  return 60.0 * u * (1.0 - 3.0 * u + 2.0 * u * u) / (T_rec * T_rec);
}

Quat slerp(const Quat& r0, const Quat& r1, double u) {
  Quat a = r0.normalized();
  Quat b = r1.normalized();
  double dot = a.dot(b);
  if (dot < 0.0) {
    b.coeffs() *= -1.0;
    dot = -dot;
  }
  dot = std::min(dot, 1.0);
  const double theta = std::acos(dot);
  Quat out;
  if (theta < 1e-6) {
    out.coeffs() = (1.0 - u) * a.coeffs() + u * b.coeffs();
  } else {
    const double s = std::sin(theta);
    out.coeffs() = (std::sin((1.0 - u) * theta) / s) * a.coeffs() +
                   (std::sin(u * theta) / s) * b.coeffs();
  }
  return out.normalized();
}

MinJerkPlan::MinJerkPlan(double start, double duration, const Pose& initial,
                         std::function<Pose(double)> target)
    : t_i(start), T_rec(duration), x_i(initial), target_provider(std::move(target)) {
  if (!(T_rec > 0.0)) throw ContractViolation("recovery duration must be positive");
  if (!target_provider) throw ContractViolation("recovery plan needs a target provider");
}

Pose plan_pose(const MinJerkPlan& plan, double t) {
  const Pose target = plan.target_provider(t);
  const double phi = phase(t, plan.t_i, plan.T_rec);
  if (phi == 0.0) return plan.x_i;
  if (phi == 1.0) return target;
  const Vec3 p = plan.x_i.p + phi * (target.p - plan.x_i.p);
  return Pose(p, slerp(plan.x_i.r, target.r, phi));
}

Twist plan_velocity(const MinJerkPlan& plan, double t) {
  const Pose target = plan.target_provider(t);
  Twist v;
  v.v = phase_rate(t, plan.t_i, plan.T_rec) * (target.p - plan.x_i.p);
  return v;
}

Twist plan_acceleration(const MinJerkPlan& plan, double t) {
  const Pose target = plan.target_provider(t);
  Twist a;
  a.v = phase_accel(t, plan.t_i, plan.T_rec) * (target.p - plan.x_i.p);
  return a;
}

}  // namespace mmic
