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
 * @file robot_core.hpp
 * @brief Kinematics and rigid-body dynamics of a redundant serial arm.
 *
 * The chain is described with modified Denavit-Hartenberg parameters
 * (Craig convention): link i is reached from link i-1 through
 *   RotX(alpha) * TransX(a) * RotZ(theta_i + offset) * TransZ(d)
 * and joint i rotates about the z-axis of frame i. A rigid tool (the probe)
 * is attached to the last frame.
 *
 * Dynamics follow  M(q) q'' + C(q, q') q' + g(q) = u + J^T f_e.
 */

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Mat6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;
using MatX6 = Eigen::Matrix<double, Eigen::Dynamic, 6>;
using Quat = Eigen::Quaterniond;

/// Raised when a caller breaks an operation's preconditions
/// (dimension mismatch, non-finite input, invalid parameters).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LinkParams {
  double a = 0.0;             // m, along previous x
  double alpha = 0.0;         // rad, about previous x
  double d = 0.0;             // m, along own z
  double theta_offset = 0.0;  // rad, added to the joint angle
  double mass = 1.0;          // kg
  Vec3 com = Vec3::Zero();    // m, in link frame
  Mat3 inertia = Mat3::Identity() * 1e-3;  // kg m^2 about the COM, link frame
};

struct JointLimit {
  double lower = -3.14159265358979;
  double upper = 3.14159265358979;
};

struct RobotModel {
  std::string name = "arm";
  std::vector<LinkParams> links;
  std::vector<JointLimit> joint_limits;
  VecX torque_limits;                 // N m, per joint
  Vec6 f_max = Vec6::Constant(50.0);  // per component of f_e (N, N m)
  double tool_length = 0.0;           // m, along the last z-axis
  double tool_yaw = 0.0;              // rad, about the last z-axis
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
  VecX home;                          // rad, seed posture

  int dof() const { return static_cast<int>(links.size()); }

  /// Throws ContractViolation naming the first broken invariant.
  void validate() const;
};

/// Seven-joint reference arm shipped with the library. Geometry follows a
/// common collaborative-arm layout; inertial values are repo constants.
RobotModel reference_model();

struct JointState {
  VecX q;   // rad
  VecX dq;  // rad/s
};

/// Position plus unit quaternion, canonicalized so that w >= 0.
struct Pose {
  Vec3 p = Vec3::Zero();
  Quat r = Quat::Identity();

  Pose() = default;
  Pose(const Vec3& position, const Quat& rotation);

  Mat3 rotation() const { return r.toRotationMatrix(); }
};

Quat canonical(const Quat& r);

struct Twist {
  Vec3 v = Vec3::Zero();  // m/s
  Vec3 w = Vec3::Zero();  // rad/s

  Vec6 stacked() const;
  static Twist from(const Vec6& x);
};

enum class WrenchFrame { Base, EndEffector };

struct Wrench {
  Vec3 f = Vec3::Zero();    // N
  Vec3 tau = Vec3::Zero();  // N m
  WrenchFrame frame = WrenchFrame::Base;

  Vec6 stacked() const;
  /// Re-express in the base frame given the end-effector orientation.
  Wrench to_base(const Quat& ee_rotation) const;
  /// Re-express in the end-effector frame {E}.
  Wrench to_end_effector(const Quat& ee_rotation) const;

  Wrench operator+(const Wrench& other) const;
};

/// Joint frames of the chain evaluated at one configuration.
struct ChainFrames {
  std::vector<Mat3> R;  // orientation of frame i in base
  std::vector<Vec3> o;  // origin of frame i (joint i lies on its z-axis)
  std::vector<Vec3> z;  // joint axis i in base
  Mat3 R_tool = Mat3::Identity();
  Vec3 p_tool = Vec3::Zero();
};

ChainFrames compute_frames(const RobotModel& model, const VecX& q);

Pose forward_kinematics(const RobotModel& model, const VecX& q);

/// Geometric Jacobian of the tool point: rows 0-2 linear, 3-5 angular, base
/// frame.
Mat6X jacobian(const RobotModel& model, const VecX& q);
Mat6X jacobian(const ChainFrames& frames);

/// Drift term J'(q) q' by central differencing J along the motion direction.
Vec6 jacobian_dot_times_dq(const RobotModel& model, const VecX& q,
                           const VecX& dq);

inline constexpr double kDampingOnsetSigma = 0.05;
inline constexpr double kMaxDamping = 0.05;

struct PseudoInverse {
  MatX6 J_pinv;
  double sigma_min = 0.0;
  double damping = 0.0;  // lambda in J^T (J J^T + lambda^2 I)^-1
  bool near_singular = false;
};

/// Moore-Penrose inverse away from singularities, damped least squares with
/// lambda ramping linearly from 0 (sigma_min = 0.05) to 0.05 (sigma_min = 0).
PseudoInverse pseudoinverse(const Mat6X& J);

/// I - J^+ J using the (possibly damped) inverse.
MatX null_projector(const Mat6X& J, const PseudoInverse& pinv);
MatX null_projector(const Mat6X& J);

MatX mass_matrix(const RobotModel& model, const VecX& q);

/// dM/dq_k for every k, analytic.
std::vector<MatX> mass_matrix_partials(const RobotModel& model, const VecX& q);

/// Coriolis matrix from Christoffel symbols of M, so that M' - 2C is skew.
MatX coriolis_matrix(const RobotModel& model, const VecX& q, const VecX& dq);

VecX gravity(const RobotModel& model, const VecX& q);

/// Everything the controller and the plant need at one state, sharing the
/// kinematic pass.
struct DynamicsTerms {
  ChainFrames frames;
  Pose pose;
  Mat6X J;
  MatX M;
  MatX C;
  VecX g;
};

DynamicsTerms compute_dynamics(const RobotModel& model, const JointState& s);

struct LimitEvent {
  enum class Kind { TorqueClamp, JointClamp };
  Kind kind;
  int joint;
  double value;  // requested value before clamping
  double limit;
};

/// Clamp u to the model's torque limits, recording every clamped joint.
VecX clamp_torque(const RobotModel& model, const VecX& u,
                  std::vector<LimitEvent>* events = nullptr);

/// q'' = M^-1 (u + J^T f_e - C q' - g), f_e converted to the base frame.
/// Torques beyond the limits are clamped and reported.
VecX forward_dynamics(const RobotModel& model, const JointState& state,
                      const VecX& u, const Wrench& f_e,
                      std::vector<LimitEvent>* events = nullptr);

/// Same, reusing precomputed terms (the pose inside `terms` is used to
/// convert an end-effector-frame wrench).
VecX forward_dynamics(const RobotModel& model, const DynamicsTerms& terms,
                      const JointState& state, const VecX& u,
                      const Wrench& f_e,
                      std::vector<LimitEvent>* events = nullptr);

inline constexpr double kDefaultTimeStep = 1e-3;

/// Semi-implicit Euler: dq += q'' dt, then q += dq dt. Joints leaving their
/// limits are clamped, their outward velocity zeroed, and reported.
JointState integrate(const RobotModel& model, const JointState& state,
                     const VecX& qdd, double dt,
                     std::vector<LimitEvent>* events = nullptr);

/// Damped least-squares inverse kinematics for a full pose target. Returns
/// nullopt when the residual does not drop below `tolerance`.
std::optional<VecX> solve_ik(const RobotModel& model, const Pose& target,
                             const VecX& seed, double tolerance = 1e-9,
                             int max_iterations = 2000);

/// Throws ContractViolation unless `v` has `n` finite entries.
void require_finite(const VecX& v, Eigen::Index n, const char* what);

}  // namespace mmic
