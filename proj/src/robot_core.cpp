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

#include "mmic/robot_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mmic {

namespace {

Mat3 rot_x(double a) {
  return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix();
}

Mat3 rot_z(double a) {
  return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix();
}

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

void require_dof(const RobotModel& model, const VecX& q, const char* what) {
  require_finite(q, model.dof(), what);
}

// Rotation vector of a * b^-1, shortest arc.
Vec3 rotation_error(const Quat& a, const Quat& b) {
  Quat e = canonical(a * b.conjugate());
  Eigen::AngleAxisd aa(e);
  return aa.axis() * aa.angle();
}

}  // namespace

void require_finite(const VecX& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << what << ": expected length " << n << ", got " << v.size();
    throw ContractViolation(msg.str());
  }
  if (!v.allFinite()) {
    throw ContractViolation(std::string(what) + ": non-finite entry");
  }
}

void RobotModel::validate() const {
  const int n = dof();
  if (n <= 6) {
    throw ContractViolation("robot model: redundancy requires more than 6 joints");
  }
  if (static_cast<int>(joint_limits.size()) != n) {
    throw ContractViolation("robot model: joint_limits size must equal joint count");
  }
  if (torque_limits.size() != n) {
    throw ContractViolation("robot model: torque_limits size must equal joint count");
  }
  for (int i = 0; i < n; ++i) {
    const auto& l = links[i];
    const std::string tag = "robot model: link " + std::to_string(i + 1);
    if (!(l.mass > 0.0) || !std::isfinite(l.mass)) {
      throw ContractViolation(tag + " mass must be positive");
    }
    if (!l.inertia.allFinite() || !l.inertia.isApprox(l.inertia.transpose(), 1e-12)) {
      throw ContractViolation(tag + " inertia must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(l.inertia);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
      throw ContractViolation(tag + " inertia must be positive definite");
    }
    if (!(joint_limits[i].lower < joint_limits[i].upper)) {
      throw ContractViolation(tag + " joint limits must satisfy lower < upper");
    }
    if (!(torque_limits[i] > 0.0)) {
      throw ContractViolation(tag + " torque limit must be positive");
    }
  }
  if (!(f_max.array() > 0.0).all()) {
    throw ContractViolation("robot model: f_max entries must be positive");
  }
  if (home.size() != 0 && home.size() != n) {
    throw ContractViolation("robot model: home posture size must equal joint count");
  }
  for (Eigen::Index i = 0; i < home.size(); ++i) {
    if (home[i] < joint_limits[i].lower || home[i] > joint_limits[i].upper) {
      throw ContractViolation("robot model: home posture outside the joint limits");
    }
  }
}

RobotModel reference_model() {
  using std::numbers::pi;
  RobotModel m;
  m.name = "reference-7dof";

  struct Row {
    double a, alpha, d, mass;
    Vec3 com;
    Vec3 inertia_diag;
  };
  // Modified DH geometry of a common 7-DOF collaborative arm. The last link
  // carries the flange and an ultrasound probe.
  const Row rows[] = {
      {0.0, 0.0, 0.333, 4.971, {0.0039, 0.0021, -0.0476}, {0.0703, 0.0707, 0.0091}},
      {0.0, -pi / 2, 0.0, 0.6469, {-0.0031, -0.0286, 0.0035}, {0.0080, 0.0028, 0.0100}},
      {0.0, pi / 2, 0.316, 3.2286, {0.0275, 0.0392, -0.0665}, {0.0372, 0.0361, 0.0108}},
      {0.0825, pi / 2, 0.0, 3.5879, {-0.0532, 0.1044, 0.0275}, {0.0259, 0.0196, 0.0283}},
      {-0.0825, -pi / 2, 0.384, 1.2259, {-0.0120, 0.0410, -0.0384}, {0.0355, 0.0294, 0.0086}},
      {0.0, pi / 2, 0.0, 1.6666, {0.0601, -0.0141, -0.0105}, {0.0020, 0.0043, 0.0054}},
      {0.088, pi / 2, 0.0, 1.1350, {0.0105, -0.0043, 0.1100}, {0.0125, 0.0100, 0.0048}},
  };
  for (const auto& r : rows) {
    LinkParams l;
    l.a = r.a;
    l.alpha = r.alpha;
    l.d = r.d;
    l.mass = r.mass;
    l.com = r.com;
    l.inertia = r.inertia_diag.asDiagonal();
    m.links.push_back(l);
  }
  m.joint_limits = {{-2.8973, 2.8973}, {-1.7628, 1.7628}, {-2.8973, 2.8973},
                    {-3.0718, -0.0698}, {-2.8973, 2.8973}, {-0.0175, 3.7525},
                    {-2.8973, 2.8973}};
  m.torque_limits.resize(7);
  m.torque_limits << 87, 87, 87, 87, 12, 12, 12;
  m.f_max << 50, 50, 50, 10, 10, 10;
  m.tool_length = 0.107 + 0.12;  // flange + probe
  m.tool_yaw = 0.0;
  m.home.resize(7);
  m.home << 0.0, -pi / 4, 0.0, -3 * pi / 4, 0.0, pi / 2, pi / 4;
  return m;
}

Quat canonical(const Quat& r) {
  Quat n = r.normalized();
  if (n.w() < 0.0) n.coeffs() *= -1.0;
  return n;
}

Pose::Pose(const Vec3& position, const Quat& rotation)
    : p(position), r(canonical(rotation)) {}

Vec6 Twist::stacked() const {
  Vec6 x;
  x << v, w;
  return x;
}

Twist Twist::from(const Vec6& x) {
  Twist t;
  t.v = x.head<3>();
  t.w = x.tail<3>();
  return t;
}

Vec6 Wrench::stacked() const {
  Vec6 x;
  x << f, tau;
  return x;
}

Wrench Wrench::to_base(const Quat& ee_rotation) const {
  if (frame == WrenchFrame::Base) return *this;
  const Mat3 R = ee_rotation.toRotationMatrix();
  return {R * f, R * tau, WrenchFrame::Base};
}

Wrench Wrench::to_end_effector(const Quat& ee_rotation) const {
  if (frame == WrenchFrame::EndEffector) return *this;
  const Mat3 R = ee_rotation.toRotationMatrix();
  return {R.transpose() * f, R.transpose() * tau, WrenchFrame::EndEffector};
}

Wrench Wrench::operator+(const Wrench& other) const {
  if (frame != other.frame) {
    throw ContractViolation("wrench sum: frames differ");
  }
  return {f + other.f, tau + other.tau, frame};
}

ChainFrames compute_frames(const RobotModel& model, const VecX& q) {
  require_dof(model, q, "joint angles");
  const int n = model.dof();
  ChainFrames fr;
  fr.R.resize(n);
  fr.o.resize(n);
  fr.z.resize(n);
  Mat3 R = Mat3::Identity();
  Vec3 p = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const auto& l = model.links[i];
    const Mat3 Rx = rot_x(l.alpha);
    p = p + R * (Rx * Vec3(l.a, 0.0, 0.0));
    R = R * Rx * rot_z(q[i] + l.theta_offset);
    p = p + R * Vec3(0.0, 0.0, l.d);
    fr.R[i] = R;
    fr.o[i] = p;
    fr.z[i] = R.col(2);
  }
  fr.p_tool = p + R * Vec3(0.0, 0.0, model.tool_length);
  fr.R_tool = R * rot_z(model.tool_yaw);
  return fr;
}

Pose forward_kinematics(const RobotModel& model, const VecX& q) {
  const ChainFrames fr = compute_frames(model, q);
  return Pose(fr.p_tool, Quat(fr.R_tool));
}

Mat6X jacobian(const ChainFrames& fr) {
  const auto n = static_cast<Eigen::Index>(fr.z.size());
  Mat6X J(6, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    J.block<3, 1>(0, j) = fr.z[j].cross(fr.p_tool - fr.o[j]);
    J.block<3, 1>(3, j) = fr.z[j];
  }
  return J;
}

Mat6X jacobian(const RobotModel& model, const VecX& q) {
  return jacobian(compute_frames(model, q));
}

Vec6 jacobian_dot_times_dq(const RobotModel& model, const VecX& q,
                           const VecX& dq) {
  require_dof(model, q, "joint angles");
  require_dof(model, dq, "joint velocities");
  const double speed = dq.norm();
  if (speed == 0.0) return Vec6::Zero();
  constexpr double h = 1e-6;
  const VecX dir = dq / speed;
  const Mat6X Jp = jacobian(model, q + h * dir);
  const Mat6X Jm = jacobian(model, q - h * dir);
  return ((Jp - Jm) / (2.0 * h)) * (speed * dq);
}

PseudoInverse pseudoinverse(const Mat6X& J) {
  if (!J.allFinite()) throw ContractViolation("pseudoinverse: non-finite Jacobian");
  Eigen::JacobiSVD<MatX> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecX& s = svd.singularValues();
  PseudoInverse out;
  // Fewer than 6 columns means rank < 6 by construction.
  out.sigma_min = J.cols() < 6 ? 0.0 : s.minCoeff();
  if (out.sigma_min <= kDampingOnsetSigma) {
    out.near_singular = true;
    out.damping = kMaxDamping * (1.0 - out.sigma_min / kDampingOnsetSigma);
  }
  const double lambda2 = out.damping * out.damping;
  VecX inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double denom = s[i] * s[i] + lambda2;
    inv[i] = denom > 0.0 ? s[i] / denom : 0.0;
  }
  out.J_pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return out;
}

MatX null_projector(const Mat6X& J, const PseudoInverse& pinv) {
  return MatX::Identity(J.cols(), J.cols()) - pinv.J_pinv * J;
}

MatX null_projector(const Mat6X& J) { return null_projector(J, pseudoinverse(J)); }

namespace {

// Per-link quantities shared by M, dM/dq and g.
struct LinkTerms {
  Vec3 c;    // COM in base
  Mat3 Iw;   // inertia in base orientation
  MatX Jv;   // 3 x n, columns beyond the link are zero
  MatX Jw;   // 3 x n
};

std::vector<LinkTerms> link_terms(const RobotModel& model, const ChainFrames& fr) {
  const int n = model.dof();
  std::vector<LinkTerms> out(n);
  for (int i = 0; i < n; ++i) {
    auto& t = out[i];
    const auto& l = model.links[i];
    t.c = fr.o[i] + fr.R[i] * l.com;
    t.Iw = fr.R[i] * l.inertia * fr.R[i].transpose();
    t.Jv = MatX::Zero(3, n);
    t.Jw = MatX::Zero(3, n);
    for (int j = 0; j <= i; ++j) {
      t.Jv.col(j) = fr.z[j].cross(t.c - fr.o[j]);
      t.Jw.col(j) = fr.z[j];
    }
  }
  return out;
}

MatX assemble_mass(const RobotModel& model, const std::vector<LinkTerms>& lt) {
  const int n = model.dof();
  MatX M = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& t = lt[i];
    M.noalias() += model.links[i].mass * t.Jv.transpose() * t.Jv;
    M.noalias() += t.Jw.transpose() * t.Iw * t.Jw;
  }
  return 0.5 * (M + M.transpose());
}

std::vector<MatX> assemble_mass_partials(const RobotModel& model,
                                         const ChainFrames& fr,
                                         const std::vector<LinkTerms>& lt) {
  const int n = model.dof();
  std::vector<MatX> dM(n, MatX::Zero(n, n));
  MatX dJv(3, n), dJw(3, n);
  for (int k = 0; k < n; ++k) {
    const Vec3& zk = fr.z[k];
    const Vec3& ok = fr.o[k];
    const Mat3 Sk = skew(zk);
    // Joint axes and origins only move with joints before them.
    std::vector<Vec3> dz(n, Vec3::Zero()), dO(n, Vec3::Zero());
    for (int j = k + 1; j < n; ++j) {
      dz[j] = zk.cross(fr.z[j]);
      dO[j] = zk.cross(fr.o[j] - ok);
    }
    for (int i = k; i < n; ++i) {
      const auto& t = lt[i];
      const Vec3 dc = zk.cross(t.c - ok);
      const Mat3 dIw = Sk * t.Iw - t.Iw * Sk;
      dJv.setZero();
      dJw.setZero();
      for (int j = 0; j <= i; ++j) {
        dJv.col(j) = dz[j].cross(t.c - fr.o[j]) + fr.z[j].cross(dc - dO[j]);
        dJw.col(j) = dz[j];
      }
      const MatX a = model.links[i].mass * dJv.transpose() * t.Jv;
      const MatX b = dJw.transpose() * t.Iw * t.Jw;
      dM[k].noalias() += a + a.transpose() + b + b.transpose();
      dM[k].noalias() += t.Jw.transpose() * dIw * t.Jw;
    }
  }
  return dM;
}

VecX assemble_gravity(const RobotModel& model, const std::vector<LinkTerms>& lt) {
  const int n = model.dof();
  VecX g = VecX::Zero(n);
  for (int i = 0; i < n; ++i) {
    g.noalias() -= model.links[i].mass * lt[i].Jv.transpose() * model.gravity;
  }
  return g;
}

MatX christoffel_coriolis(const std::vector<MatX>& dM, const VecX& dq) {
  const auto n = dq.size();
  MatX C = MatX::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double c = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        c += (dM[k](i, j) + dM[j](i, k) - dM[i](j, k)) * dq[k];
      }
      C(i, j) = 0.5 * c;
    }
  }
  return C;
}

}  // namespace

MatX mass_matrix(const RobotModel& model, const VecX& q) {
  const ChainFrames fr = compute_frames(model, q);
  return assemble_mass(model, link_terms(model, fr));
}

std::vector<MatX> mass_matrix_partials(const RobotModel& model, const VecX& q) {
  const ChainFrames fr = compute_frames(model, q);
  return assemble_mass_partials(model, fr, link_terms(model, fr));
}

MatX coriolis_matrix(const RobotModel& model, const VecX& q, const VecX& dq) {
  require_dof(model, dq, "joint velocities");
  return christoffel_coriolis(mass_matrix_partials(model, q), dq);
}

VecX gravity(const RobotModel& model, const VecX& q) {
  const ChainFrames fr = compute_frames(model, q);
  return assemble_gravity(model, link_terms(model, fr));
}

DynamicsTerms compute_dynamics(const RobotModel& model, const JointState& s) {
  require_dof(model, s.dq, "joint velocities");
  DynamicsTerms t;
  t.frames = compute_frames(model, s.q);
  t.pose = Pose(t.frames.p_tool, Quat(t.frames.R_tool));
  t.J = jacobian(t.frames);
  const auto lt = link_terms(model, t.frames);
  t.M = assemble_mass(model, lt);
  t.C = christoffel_coriolis(assemble_mass_partials(model, t.frames, lt), s.dq);
  t.g = assemble_gravity(model, lt);
  return t;
}

VecX clamp_torque(const RobotModel& model, const VecX& u,
                  std::vector<LimitEvent>* events) {
  require_dof(model, u, "joint torques");
  VecX out = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double lim = model.torque_limits[i];
    if (std::abs(u[i]) > lim) {
      out[i] = std::copysign(lim, u[i]);
      if (events) {
        events->push_back({LimitEvent::Kind::TorqueClamp, static_cast<int>(i), u[i], lim});
      }
    }
  }
  return out;
}

VecX forward_dynamics(const RobotModel& model, const DynamicsTerms& t,
                      const JointState& state, const VecX& u,
                      const Wrench& f_e, std::vector<LimitEvent>* events) {
  const VecX tau = clamp_torque(model, u, events);
  const Vec6 fe = f_e.to_base(t.pose.r).stacked();
  if (!fe.allFinite()) throw ContractViolation("external wrench: non-finite entry");
  const VecX rhs = tau + t.J.transpose() * fe - t.C * state.dq - t.g;
  return t.M.llt().solve(rhs);
}

VecX forward_dynamics(const RobotModel& model, const JointState& state,
                      const VecX& u, const Wrench& f_e,
                      std::vector<LimitEvent>* events) {
  return forward_dynamics(model, compute_dynamics(model, state), state, u, f_e,
                          events);
}

JointState integrate(const RobotModel& model, const JointState& state,
                     const VecX& qdd, double dt,
                     std::vector<LimitEvent>* events) {
  if (!(dt > 0.0)) throw ContractViolation("integrate: dt must be positive");
  require_dof(model, state.q, "joint angles");
  require_dof(model, state.dq, "joint velocities");
  require_dof(model, qdd, "joint accelerations");
  JointState next;
  next.dq = state.dq + qdd * dt;
  next.q = state.q + next.dq * dt;
  for (int i = 0; i < model.dof(); ++i) {
    const auto& lim = model.joint_limits[i];
    if (next.q[i] < lim.lower || next.q[i] > lim.upper) {
      const double bound = next.q[i] < lim.lower ? lim.lower : lim.upper;
      if (events) {
        events->push_back({LimitEvent::Kind::JointClamp, i, next.q[i], bound});
      }
      next.q[i] = bound;
      if ((bound == lim.lower && next.dq[i] < 0.0) ||
          (bound == lim.upper && next.dq[i] > 0.0)) {
        next.dq[i] = 0.0;
      }
    }
  }
  return next;
}

std::optional<VecX> solve_ik(const RobotModel& model, const Pose& target,
                             const VecX& seed, double tolerance,
                             int max_iterations) {
  require_dof(model, seed, "ik seed");
  VecX q = seed;
  const int n = model.dof();
  for (int it = 0; it < max_iterations; ++it) {
    const ChainFrames fr = compute_frames(model, q);
    Vec6 err;
    err << target.p - fr.p_tool, rotation_error(target.r, Quat(fr.R_tool));
    if (err.norm() < tolerance) return q;
    const Mat6X J = jacobian(fr);
    const double lambda2 = 1e-4;
    const Mat6 JJt = J * J.transpose() + lambda2 * Mat6::Identity();
    const MatX6 Jinv = J.transpose() * JJt.ldlt().solve(Mat6::Identity());
    // Exact projector so the posture pull never leaks into the task error.
    const Eigen::JacobiSVD<MatX> svd(J, Eigen::ComputeFullV);
    const MatX Vr = svd.matrixV().leftCols(6);
    const MatX N = MatX::Identity(n, n) - Vr * Vr.transpose();
    VecX step = Jinv * err + N * (0.1 * (seed - q));
    const double max_step = 0.2;
    if (step.norm() > max_step) step *= max_step / step.norm();
    q += step;
    for (int i = 0; i < n; ++i) {
      q[i] = std::clamp(q[i], model.joint_limits[i].lower, model.joint_limits[i].upper);
    }
  }
  return std::nullopt;
}

}  // namespace mmic
