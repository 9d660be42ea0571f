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

#include "mmic/controller.hpp"

#include <cmath>

namespace mmic {

namespace {

Vec6 base_wrench(const Wrench& f_e, const Pose& pose) {
  return f_e.frame == WrenchFrame::Base ? f_e.stacked() : f_e.to_base(pose.r).stacked();
}

}  // namespace

DampingGains critical_damping(const Vec6& M_d, const Vec6& K_g, const VecX& K_gn) {
  if ((M_d.array() <= 0.0).any()) throw ContractViolation("M_d must be positive");
  if ((K_g.array() < 0.0).any() || (K_gn.array() < 0.0).any()) {
    throw ContractViolation("stiffness must be non-negative");
  }
  DampingGains d;
  d.C_d = 2.0 * (M_d.array() * K_g.array()).sqrt();
  d.K_vn = 2.0 * K_gn.array().sqrt();
  return d;
}

ImpedanceParams ImpedanceParams::critically_damped(const Vec6& M_d, const Vec6& K_g,
                                                   const VecX& K_gn) {
  const DampingGains d = critical_damping(M_d, K_g, K_gn);
  return {M_d, d.C_d, K_g, K_gn, d.K_vn};
}

ImpedanceParams ImpedanceParams::defaults(int n) {
  Vec6 M_d, K_g;
  M_d << 5.0, 5.0, 5.0, 0.5, 0.5, 0.5;
  K_g << 400.0, 400.0, 400.0, 20.0, 20.0, 20.0;
  return critically_damped(M_d, K_g, VecX::Constant(n, 10.0));
}

void ImpedanceParams::validate(int n) const {
  if (!M_d.allFinite() || (M_d.array() <= 0.0).any()) {
    throw ContractViolation("gains: M_d must be positive");
  }
  if (!K_g.allFinite() || (K_g.array() < 0.0).any()) {
    throw ContractViolation("gains: K_g must be positive semi-definite");
  }
  if (!C_d.allFinite() || (C_d.array() < 0.0).any()) {
    throw ContractViolation("gains: C_d must be non-negative");
  }
  if (K_gn.size() != n || K_vn.size() != n) {
    throw ContractViolation("gains: null-space gains need one entry per joint");
  }
  if (!K_gn.allFinite() || (K_gn.array() < 0.0).any() || !K_vn.allFinite() ||
      (K_vn.array() < 0.0).any()) {
    throw ContractViolation("gains: null-space gains must be non-negative");
  }
}

Stiffness update_stiffness(const WeightingFactors& w, const ImpedanceParams& params) {
  const double s = (1.0 - w.a_h) * (1.0 - w.a_f);
  return {s * params.K_g, s * params.K_gn};
}

Vec6 task_error(const Pose& x, const Pose& x_d) {
  Vec6 e;
  e.head<3>() = x.p - x_d.p;
  const Quat rel = canonical(x.r * x_d.r.conjugate());
  const Eigen::AngleAxisd aa(rel);
  e.tail<3>() = aa.axis() * aa.angle();
  return e;
}

ControlTerms compute_control_terms(const RobotModel& model, const JointState& state) {
  ControlTerms t;
  t.dyn = compute_dynamics(model, state);
  t.pinv = pseudoinverse(t.dyn.J);
  t.N = null_projector(t.dyn.J, t.pinv);
  t.Jdot_dq = jacobian_dot_times_dq(model, state.q, state.dq);
  return t;
}

Command command_acceleration(const ControlTerms& t, const JointState& state,
                             const ControllerState& ctrl, const ImpedanceParams& params) {
  const auto n = state.q.size();
  if (ctrl.q_dn.size() != n || ctrl.K_dn.size() != n) {
    throw ContractViolation("controller state: posture and null-space stiffness need n entries");
  }
  Command c;
  c.x_tilde = task_error(t.dyn.pose, ctrl.x_d);
  c.x_tilde_dot = t.dyn.J * state.dq - ctrl.xd_dot.stacked();
  const Vec6 impedance =
      (params.C_d.cwiseProduct(c.x_tilde_dot) + ctrl.K_d.cwiseProduct(c.x_tilde))
          .cwiseQuotient(params.M_d);
  const Vec6 task = ctrl.xd_ddot.stacked() - impedance - t.Jdot_dq;
  const VecX q_tilde = state.q - ctrl.q_dn;
  const VecX null = -params.K_vn.cwiseProduct(state.dq) - ctrl.K_dn.cwiseProduct(q_tilde);
  c.qdd_c = t.pinv.J_pinv * task + t.N * null;
  c.near_singular = t.pinv.near_singular;
  return c;
}

Command command_acceleration(const RobotModel& model, const JointState& state,
                             const ControllerState& ctrl, const ImpedanceParams& params) {
  return command_acceleration(compute_control_terms(model, state), state, ctrl, params);
}

VecX control_torque(const RobotModel& model, const ControlTerms& t, const JointState& state,
                    const VecX& qdd_c, const Wrench& f_e, const ImpedanceParams& params,
                    std::vector<LimitEvent>* events) {
  require_finite(qdd_c, model.dof(), "command acceleration");
  const Vec6 f = base_wrench(f_e, t.dyn.pose);
  const Vec6 decoupled = f.cwiseQuotient(params.M_d);
  const VecX u = t.dyn.M * qdd_c + t.dyn.C * state.dq + t.dyn.g - t.dyn.J.transpose() * f +
                 t.dyn.M * (t.pinv.J_pinv * decoupled);
  return clamp_torque(model, u, events);
}

VecX control_torque(const RobotModel& model, const JointState& state, const VecX& qdd_c,
                    const Wrench& f_e, const ImpedanceParams& params,
                    std::vector<LimitEvent>* events) {
  return control_torque(model, compute_control_terms(model, state), state, qdd_c, f_e, params,
                        events);
}

VecX null_space_residual(const MatX& N, const JointState& state, const VecX& qdd,
                         const VecX& K_vn, const VecX& K_dn, const VecX& q_tilde) {
  return N * (qdd + K_vn.cwiseProduct(state.dq) + K_dn.cwiseProduct(q_tilde));
}

VecX null_space_residual(const RobotModel& model, const JointState& state, const VecX& qdd,
                         const VecX& K_vn, const VecX& K_dn, const VecX& q_tilde) {
  return null_space_residual(null_projector(jacobian(model, state.q)), state, qdd, K_vn, K_dn,
                             q_tilde);
}

Vec6 task_impedance_residual(const Vec6& x_tilde_ddot, const Vec6& x_tilde_dot,
                             const Vec6& x_tilde, const Vec6& K_d, const Vec6& f_e_base,
                             const ImpedanceParams& params) {
  return params.M_d.cwiseProduct(x_tilde_ddot) + params.C_d.cwiseProduct(x_tilde_dot) +
         K_d.cwiseProduct(x_tilde) - f_e_base;
}

}  // namespace mmic
