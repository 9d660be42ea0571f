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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "mmic/controller.hpp"

using namespace mmic;
using mmic::test::random_q;
using mmic::test::random_vec;

namespace {

// Non-singular random state of the reference arm.
JointState random_state(const RobotModel& m, std::mt19937_64& rng, double speed = 0.5) {
  for (;;) {
    JointState s{random_q(m, rng), random_vec(7, rng, speed)};
    if (pseudoinverse(jacobian(m, s.q)).sigma_min > 0.1) return s;
  }
}

ControllerState random_ctrl(const RobotModel& m, const JointState& s, std::mt19937_64& rng) {
  ControllerState c;
  const Pose x = forward_kinematics(m, s.q);
  c.x_d = Pose(x.p + random_vec(3, rng, 0.02),
               Quat(Eigen::AngleAxisd(0.1, Vec3(random_vec(3, rng)).normalized())) * x.r);
  c.xd_dot = Twist::from(random_vec(6, rng, 0.1));
  c.xd_ddot = Twist::from(random_vec(6, rng, 0.1));
  c.K_d = random_vec(6, rng, 1.0).cwiseAbs().cwiseProduct(ImpedanceParams::defaults(7).K_g);
  c.K_dn = random_vec(7, rng, 10.0).cwiseAbs();
  c.q_dn = s.q + random_vec(7, rng, 0.1);
  return c;
}

}  // namespace

TEST_CASE("critical damping") {
  Vec6 M = Vec6::Ones(), K = Vec6::Constant(400.0);
  K[5] = 0.0;
  const DampingGains d = critical_damping(M, K, VecX::Constant(7, 9.0));
  CHECK(d.C_d[0] == 40.0);
  CHECK(d.C_d[5] == 0.0);
  CHECK(d.K_vn[0] == 6.0);
  CHECK_THROWS_AS(critical_damping(Vec6::Zero(), K, VecX::Ones(7)), ContractViolation);
}

TEST_CASE("critically damped scalar step response does not overshoot") {
  const double M = 1.0, K = 400.0, C = critical_damping(Vec6::Constant(M), Vec6::Constant(K),
                                                        VecX::Ones(1))
                                          .C_d[0];
  // RK4 on x'' = -(C x' + K x) / M from x = 1.
  double x = 1.0, v = 0.0, lowest = 1.0;
  const double h = 1e-4;
  auto f = [&](double xx, double vv) { return -(C * vv + K * xx) / M; };
  for (int k = 0; k < 20000; ++k) {
    const double k1x = v, k1v = f(x, v);
    const double k2x = v + 0.5 * h * k1v, k2v = f(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    const double k3x = v + 0.5 * h * k2v, k3v = f(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    const double k4x = v + h * k3v, k4v = f(x + h * k3x, v + h * k3v);
    x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    lowest = std::min(lowest, x);
  }
  CHECK(lowest > -1e-9);
  CHECK(std::abs(x) < 1e-6);
}

TEST_CASE("default gains") {
  const ImpedanceParams p = ImpedanceParams::defaults(7);
  CHECK(p.M_d[0] == 5.0);
  CHECK(p.M_d[3] == 0.5);
  CHECK(p.K_g[0] == 400.0);
  CHECK(p.K_g[3] == 20.0);
  CHECK(p.C_d[0] == doctest::Approx(2.0 * std::sqrt(2000.0)));
  CHECK(p.K_vn[0] == doctest::Approx(2.0 * std::sqrt(10.0)));
  CHECK_NOTHROW(p.validate(7));
  CHECK_THROWS_AS(p.validate(6), ContractViolation);
}

TEST_CASE("stiffness scaling by the weighting factors") {
  const ImpedanceParams p = ImpedanceParams::defaults(7);
  const Stiffness hg = update_stiffness({1.0, 0.3, 0.7}, p);
  CHECK(hg.K_d.isZero(0.0));
  CHECK(hg.K_dn.isZero(0.0));
  const Stiffness full = update_stiffness({0.0, 0.5, 0.0}, p);
  CHECK(full.K_d == p.K_g);
  CHECK(full.K_dn == p.K_gn);
  const Stiffness half = update_stiffness({0.0, 1.0, 0.5}, p);
  CHECK((half.K_d - 0.5 * p.K_g).norm() == 0.0);
}

TEST_CASE("task error") {
  const Pose x(Vec3(0.3, 0.1, 0.5), Quat(Eigen::AngleAxisd(0.2, Vec3::UnitY())));
  CHECK(task_error(x, x).norm() == 0.0);
  Pose shifted = x;
  shifted.p.z() -= 0.1;
  const Vec6 e = task_error(x, shifted);
  CHECK((e.head<3>() - Vec3(0, 0, 0.1)).norm() < 1e-15);
  CHECK(e.tail<3>().norm() < 1e-15);
  const Pose a(Vec3::Zero(), Quat::Identity());
  const Pose b(Vec3::Zero(), Quat(Eigen::AngleAxisd(std::numbers::pi / 6, Vec3::UnitX())));
  const Vec6 r = task_error(b, a);
  CHECK((r.tail<3>() - Vec3(std::numbers::pi / 6, 0, 0)).norm() < 1e-9);
}

TEST_CASE("commanded acceleration vanishes at rest on target") {
  const RobotModel m = reference_model();
  const JointState s{m.home, VecX::Zero(7)};
  ControllerState c;
  c.x_d = forward_kinematics(m, m.home);
  c.K_d = ImpedanceParams::defaults(7).K_g;
  c.K_dn = VecX::Constant(7, 10.0);
  c.q_dn = m.home;
  const Command cmd = command_acceleration(m, s, c, ImpedanceParams::defaults(7));
  CHECK(cmd.qdd_c.norm() < 1e-12);
  CHECK(cmd.x_tilde.norm() < 1e-12);
}

TEST_CASE("pure null-space displacement commands only null-space motion") {
  const RobotModel m = reference_model();
  const Mat6X J = jacobian(m, m.home);
  const MatX N = null_projector(J);
  const VecX q_tilde = N * VecX::Constant(7, 0.05);
  const JointState s{m.home, VecX::Zero(7)};
  ControllerState c;
  c.x_d = forward_kinematics(m, m.home);
  c.K_d = ImpedanceParams::defaults(7).K_g;
  c.K_dn = VecX::Constant(7, 10.0);
  c.q_dn = m.home - q_tilde;
  const Command cmd = command_acceleration(m, s, c, ImpedanceParams::defaults(7));
  CHECK(cmd.qdd_c.norm() > 1e-3);
  CHECK((N * cmd.qdd_c - cmd.qdd_c).norm() < 1e-10);
  // With dq = 0 there is no J'dq term, so the task acceleration is zero.
  CHECK((J * cmd.qdd_c).norm() < 1e-10);
}

TEST_CASE("commanded acceleration matches a straight-line restatement") {
  const RobotModel m = reference_model();
  const ImpedanceParams p = ImpedanceParams::defaults(7);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 30; ++k) {
    const JointState s = random_state(m, rng);
    const ControllerState c = random_ctrl(m, s, rng);
    const Command cmd = command_acceleration(m, s, c, p);

    const Mat6X J = jacobian(m, s.q);
    const MatX Jp = Eigen::CompleteOrthogonalDecomposition<MatX>(J).pseudoInverse();
    const MatX N = MatX::Identity(7, 7) - Jp * J;
    const Pose x = forward_kinematics(m, s.q);
    Vec6 xt;
    xt.head<3>() = x.p - c.x_d.p;
    const Eigen::AngleAxisd aa(Mat3(x.rotation() * c.x_d.rotation().transpose()));
    xt.tail<3>() = aa.angle() * aa.axis();
    const Vec6 xtd = J * s.dq - c.xd_dot.stacked();
    Mat6 Md = p.M_d.asDiagonal(), Cd = p.C_d.asDiagonal(), Kd = c.K_d.asDiagonal();
    const Vec6 acc = c.xd_ddot.stacked() - Md.inverse() * (Cd * xtd + Kd * xt) -
                     jacobian_dot_times_dq(m, s.q, s.dq);
    const MatX Kvn = p.K_vn.asDiagonal(), Kdn = c.K_dn.asDiagonal();
    const VecX oracle = Jp * acc + N * (-Kvn * s.dq - Kdn * (s.q - c.q_dn));
    CHECK((cmd.qdd_c - oracle).norm() < 1e-10 * (1.0 + oracle.norm()));
    CHECK((cmd.x_tilde - xt).norm() < 1e-12);
  }
}

TEST_CASE("control torque compensates gravity at rest") {
  const RobotModel m = reference_model();
  const JointState s{m.home, VecX::Zero(7)};
  const VecX u = control_torque(m, s, VecX::Zero(7), Wrench{}, ImpedanceParams::defaults(7));
  CHECK((u - gravity(m, m.home)).norm() < 1e-12);
}

TEST_CASE("closed-loop plug-back adds the decoupled external force") {
  const RobotModel m = reference_model();
  const ImpedanceParams p = ImpedanceParams::defaults(7);
  std::mt19937_64 rng(22);
  for (int k = 0; k < 30; ++k) {
    const JointState s = random_state(m, rng, 0.2);
    const VecX qdd_c = random_vec(7, rng, 0.3);
    Wrench f;
    f.f = random_vec(3, rng, 5.0);
    f.tau = random_vec(3, rng, 0.3);
    std::vector<LimitEvent> ev;
    const VecX u = control_torque(m, s, qdd_c, f, p, &ev);
    REQUIRE(ev.empty());
    const VecX qdd = forward_dynamics(m, s, u, f);
    const PseudoInverse pinv = pseudoinverse(jacobian(m, s.q));
    const VecX expect = pinv.J_pinv * f.stacked().cwiseQuotient(p.M_d);
    CHECK((qdd - qdd_c - expect).norm() < 1e-9);
  }
}

TEST_CASE("null-space residual") {
  const RobotModel m = reference_model();
  const JointState zero{m.home, VecX::Zero(7)};
  CHECK(null_space_residual(m, zero, VecX::Zero(7), VecX::Ones(7), VecX::Ones(7), VecX::Zero(7))
            .norm() == 0.0);
  std::mt19937_64 rng(23);
  const JointState s = random_state(m, rng);
  const VecX qdd = random_vec(7, rng);
  const VecX Kv = VecX::Constant(7, 3.0), Kd = VecX::Constant(7, 5.0);
  const VecX qt = random_vec(7, rng, 0.1);
  const VecX r0 = null_space_residual(m, s, qdd, Kv, Kd, qt);
  const PseudoInverse pinv = pseudoinverse(jacobian(m, s.q));
  const VecX r1 = null_space_residual(m, s, qdd + pinv.J_pinv * random_vec(6, rng, 3.0), Kv, Kd, qt);
  CHECK((r0 - r1).norm() < 1e-9);
}

TEST_CASE("closed loop yields zero residuals on the exact model") {
  const RobotModel m = reference_model();
  const ImpedanceParams p = ImpedanceParams::defaults(7);
  std::mt19937_64 rng(24);
  const JointState s = random_state(m, rng, 0.2);
  const ControllerState c = random_ctrl(m, s, rng);
  const ControlTerms terms = compute_control_terms(m, s);
  const Command cmd = command_acceleration(terms, s, c, p);
  Wrench f;
  f.f = Vec3(0, 0, 3.0);
  const VecX u = control_torque(m, terms, s, cmd.qdd_c, f, p);
  const VecX qdd = forward_dynamics(m, s, u, f);
  // Task acceleration from the joint acceleration.
  const Vec6 xdd = terms.dyn.J * qdd + terms.Jdot_dq;
  const Vec6 r = task_impedance_residual(xdd - c.xd_ddot.stacked(), cmd.x_tilde_dot, cmd.x_tilde,
                                         c.K_d, f.stacked(), p);
  CHECK(r.norm() < 1e-8);
  const VecX rn = null_space_residual(terms.N, s, qdd, p.K_vn, c.K_dn, s.q - c.q_dn);
  CHECK(rn.norm() < 1e-9 * (1.0 + qdd.norm()));
}

TEST_CASE("controller rejects mismatched posture sizes") {
  const RobotModel m = reference_model();
  ControllerState c;
  c.K_dn = VecX::Ones(3);
  c.q_dn = VecX::Zero(3);
  CHECK_THROWS_AS(command_acceleration(m, {m.home, VecX::Zero(7)}, c, ImpedanceParams::defaults(7)),
                  ContractViolation);
}
