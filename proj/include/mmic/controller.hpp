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

/**
 * @file controller.hpp
 * @brief Unified impedance controller with time-varying stiffness.
 *
 * Resolved acceleration control with external-force decoupling:
 *   u = M qdd_c + C dq + g - J^T f_e + M J^+ M_d^-1 f_e
 *   qdd_c = J^+ [xdd_d - M_d^-1 (C_d dx~ + K_d x~) - J' dq]
 *           + N (-K_vn dq - K_dn q~)
 * which closes the loop to M_d x~'' + C_d x~' + K_d(t) x~ = f_e in task
 * space. All gain matrices are diagonal and stored as their diagonals.
 */

#include <vector>

#include "mmic/robot_core.hpp"
#include "mmic/weighting.hpp"

namespace mmic {

struct DampingGains {
  Vec6 C_d;
  VecX K_vn;
};

/// C_d[i] = 2 sqrt(M_d[i] K_g[i]); K_vn[j] = 2 sqrt(K_gn[j]) (unit null-space
/// inertia).
DampingGains critical_damping(const Vec6& M_d, const Vec6& K_g, const VecX& K_gn);

struct ImpedanceParams {
  Vec6 M_d;
  Vec6 C_d;
  Vec6 K_g;
  VecX K_gn;
  VecX K_vn;

  /// Default gains for an n-joint arm, critically damped.
  static ImpedanceParams defaults(int n);
  /// Fills C_d and K_vn from M_d, K_g and K_gn.
  static ImpedanceParams critically_damped(const Vec6& M_d, const Vec6& K_g,
                                           const VecX& K_gn);

  void validate(int n) const;
};

struct Stiffness {
  Vec6 K_d;
  VecX K_dn;
};

/// K_d = (1 - a_h)(1 - a_f) K_g, K_dn = (1 - a_h)(1 - a_f) K_gn.
Stiffness update_stiffness(const WeightingFactors& w, const ImpedanceParams& params);

/// Translation difference stacked with the rotation vector of r r_d^-1
/// (base-frame axis-angle).
Vec6 task_error(const Pose& x, const Pose& x_d);

struct ControllerState {
  Vec6 K_d = Vec6::Zero();
  VecX K_dn;
  Pose x_d;
  Twist xd_dot;
  Twist xd_ddot;
  VecX q_dn;
};

struct Command {
  VecX qdd_c;
  Vec6 x_tilde;
  Vec6 x_tilde_dot;
  bool near_singular = false;
};

/// Per-state quantities shared by the command and the torque law.
struct ControlTerms {
  DynamicsTerms dyn;
  PseudoInverse pinv;
  MatX N;
  Vec6 Jdot_dq;
};

ControlTerms compute_control_terms(const RobotModel& model, const JointState& state);

Command command_acceleration(const RobotModel& model, const JointState& state,
                             const ControllerState& ctrl, const ImpedanceParams& params);
Command command_acceleration(const ControlTerms& terms, const JointState& state,
                             const ControllerState& ctrl, const ImpedanceParams& params);

/// Torque law; f_e is converted to the base frame if needed. Torques
/// beyond the model limits are clamped and reported through `events`.
VecX control_torque(const RobotModel& model, const JointState& state, const VecX& qdd_c,
                    const Wrench& f_e, const ImpedanceParams& params,
                    std::vector<LimitEvent>* events = nullptr);
VecX control_torque(const RobotModel& model, const ControlTerms& terms,
                    const JointState& state, const VecX& qdd_c, const Wrench& f_e,
                    const ImpedanceParams& params, std::vector<LimitEvent>* events = nullptr);

/// N(q) (qdd + K_vn dq + K_dn q~); zero for the exact closed loop.
VecX null_space_residual(const RobotModel& model, const JointState& state, const VecX& qdd,
                         const VecX& K_vn, const VecX& K_dn, const VecX& q_tilde);
VecX null_space_residual(const MatX& N, const JointState& state, const VecX& qdd,
                         const VecX& K_vn, const VecX& K_dn, const VecX& q_tilde);

/// M_d x~'' + C_d x~' + K_d x~ - f_e (f_e in the base frame).
Vec6 task_impedance_residual(const Vec6& x_tilde_ddot, const Vec6& x_tilde_dot,
                             const Vec6& x_tilde, const Vec6& K_d, const Vec6& f_e_base,
                             const ImpedanceParams& params);

}  // namespace mmic
