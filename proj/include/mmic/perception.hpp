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
 * @file perception.hpp
 * @brief Synthetic neck perception: scan reference frame from skeleton
 *        joints, point-cloud segmentation and smoothing, and generation of
 *        the scanning trajectory on the reconstructed surface.
 */

#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mmic/robot_core.hpp"

namespace mmic {

/// Perception could not produce a result from the data it was given
/// (empty segmentation, too few surface points).
class PerceptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RigidTransform {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return R * p + t; }
  Pose apply(const Pose& pose) const;
  RigidTransform inverse() const;
  RigidTransform operator*(const RigidTransform& rhs) const;
};

inline constexpr double kAlphaArtery = std::numbers::pi / 3.0;

struct Skeleton {
  Vec3 neck_joint = Vec3::Zero();
  Vec3 head_joint = Vec3::UnitZ();
  double alpha_head = 0.0;  // rad, head rotation about the cervical axis
  Vec3 hand_position = Vec3::Zero();
};

struct ScanFrame {
  RigidTransform base_from_scan;
  double alpha_artery = kAlphaArtery;

  Vec3 to_scan(const Vec3& p_base) const;
};

/// Origin at the neck joint, x towards the head joint; the orientation is
/// the capture-time probe orientation (x aligned with the neck) composed
/// with a rotation about x by (alpha_head - alpha_artery).
ScanFrame scan_frame_from_skeleton(const Skeleton& sk, const Pose& probe_pose_at_capture,
                                   double alpha_artery = kAlphaArtery);

struct PointCloud {
  std::vector<Vec3> points;
};

/// Cylinder with its axis along the local x-axis, spanning x in [0, length].
struct CylinderGeometry {
  double radius = 0.06;
  double length = 0.2;
  RigidTransform pose;  // base_from_cylinder
};

/// Uniform samples on the lateral surface with Gaussian radial noise.
PointCloud synth_neck_cloud(const CylinderGeometry& geometry, double noise_sd,
                            std::size_t count, std::uint64_t seed);

/// Closed cylindrical filter in scan coordinates:
/// sqrt(y^2 + z^2) <= r_cyl and x_bottom <= x <= x_top.
PointCloud segment_cylinder(const PointCloud& cloud, const ScanFrame& frame, double r_cyl,
                            double x_top, double x_bottom);

inline constexpr int kMlsMinNeighbors = 6;

struct MlsResult {
  PointCloud cloud;
  std::size_t dropped = 0;  // points without a usable neighbourhood
};

/// Moving least squares projection: local weighted plane, then a weighted
/// polynomial height field (Gaussian weights, bandwidth support_radius / 2).
MlsResult mls_smooth(const PointCloud& cloud, double support_radius, int poly_degree = 2);

struct ScanTrajectory {
  std::vector<Pose> poses;
  double skin_offset = 0.03;
};

struct TrajectoryOptions {
  double slab_half = 0.003;      // m
  double x_min = -std::numeric_limits<double>::infinity();  // scan-frame x range
  double x_max = std::numeric_limits<double>::infinity();
  double bin_width = 0.002;      // m, averaging bins along scan x
  double surface_radius = 0.025; // m, support of the local surface fit
};

/// Intersects the scan XY plane (artery side, y > 0) with the surface,
/// resamples the curve to N_pts points by arc length and moves each point
/// skin_offset along the inward normal. Probe z points into the skin, probe
/// x along the direction of travel. Poses are in the base frame.
ScanTrajectory generate_trajectory(const PointCloud& cloud_smoothed, const ScanFrame& frame,
                                   int N_pts, double skin_offset,
                                   const TrajectoryOptions& options = {});

ScanTrajectory transform_trajectory(const ScanTrajectory& traj, const RigidTransform& T);

// ASCII "x y z" per line, metres.
void write_xyz(const PointCloud& cloud, const std::filesystem::path& path);
PointCloud read_xyz(const std::filesystem::path& path);

// CSV: t_index,px,py,pz,qw,qx,qy,qz (t_index 1-based).
void write_trajectory_csv(const ScanTrajectory& traj, const std::filesystem::path& path);

}  // namespace mmic
