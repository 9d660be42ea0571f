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
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "mmic/perception.hpp"

using namespace mmic;

namespace {

// Cylinder along the base x-axis starting at the origin.
CylinderGeometry x_cylinder(double radius = 0.06, double length = 0.2) {
  CylinderGeometry g;
  g.radius = radius;
  g.length = length;
  return g;
}

// Scan frame equal to the base frame.
ScanFrame identity_frame() {
  Skeleton sk;
  sk.neck_joint = Vec3::Zero();
  sk.head_joint = Vec3(0.15, 0, 0);
  sk.alpha_head = kAlphaArtery;
  return scan_frame_from_skeleton(sk, Pose(), kAlphaArtery);
}

double radial(const Vec3& p) { return std::hypot(p.y(), p.z()); }

double rms_radial_error(const PointCloud& c, double r, double x_lo, double x_hi) {
  double s = 0.0;
  std::size_t n = 0;
  for (const Vec3& p : c.points) {
    if (p.x() < x_lo || p.x() > x_hi) continue;
    s += std::pow(radial(p) - r, 2);
    ++n;
  }
  return std::sqrt(s / static_cast<double>(n));
}

}  // namespace

TEST_CASE("scan frame equals the capture frame when the head is at the artery angle") {
  const Quat capture(Eigen::AngleAxisd(0.4, Vec3::UnitX()));
  Skeleton sk;
  sk.neck_joint = Vec3(0.3, 0.1, 0.2);
  sk.head_joint = sk.neck_joint + Vec3(0.15, 0, 0);
  sk.alpha_head = kAlphaArtery;
  const ScanFrame f = scan_frame_from_skeleton(sk, Pose(Vec3(1, 2, 3), capture));
  CHECK(test::inf_norm(f.base_from_scan.R - capture.toRotationMatrix()) < 1e-12);
  CHECK((f.base_from_scan.t - sk.neck_joint).norm() == 0.0);
}

TEST_CASE("a quarter-turn head offset maps scan y onto capture z") {
  const Mat3 Rc = Quat(Eigen::AngleAxisd(0.4, Vec3::UnitX())).toRotationMatrix();
  Skeleton sk;
  sk.head_joint = Vec3(0.15, 0, 0);
  sk.neck_joint = Vec3::Zero();
  sk.alpha_head = kAlphaArtery + std::numbers::pi / 2;
  const ScanFrame f = scan_frame_from_skeleton(sk, Pose(Vec3::Zero(), Quat(Rc)));
  CHECK((f.base_from_scan.R.col(1) - Rc.col(2)).norm() < 1e-12);
}

TEST_CASE("a head turn rotates the scan y-axis about x by the same angle") {
  const Quat capture(0.5, 0.5, 0.5, 0.5);
  Skeleton sk;
  sk.neck_joint = Vec3(0.5, -0.04, 0.15);
  sk.head_joint = sk.neck_joint + 0.15 * capture.toRotationMatrix().col(0);
  sk.alpha_head = 0.0;
  const ScanFrame f0 = scan_frame_from_skeleton(sk, Pose(sk.neck_joint, capture));
  sk.alpha_head = 0.3;
  const ScanFrame f1 = scan_frame_from_skeleton(sk, Pose(sk.neck_joint, capture));
  const Vec3 x = f0.base_from_scan.R.col(0);
  const Mat3 oracle = Eigen::AngleAxisd(0.3, x).toRotationMatrix();
  CHECK((f1.base_from_scan.R.col(1) - oracle * f0.base_from_scan.R.col(1)).norm() < 1e-12);
  CHECK((f1.base_from_scan.R.col(0) - x).norm() < 1e-12);
}

TEST_CASE("scan frames are orthonormal for tilted captures") {
  std::mt19937_64 rng(5);
  std::srand(5);
  for (int k = 0; k < 200; ++k) {
    Skeleton sk;
    sk.neck_joint = test::random_vec(3, rng);
    sk.head_joint = sk.neck_joint + test::random_vec(3, rng);
    sk.alpha_head = test::random_vec(1, rng, 3.0)[0];
    const ScanFrame f = scan_frame_from_skeleton(sk, Pose(Vec3::Zero(), Quat::UnitRandom()));
    const Mat3& R = f.base_from_scan.R;
    CHECK(test::inf_norm(R.transpose() * R - Mat3::Identity()) < 1e-10);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((R.col(0) - (sk.head_joint - sk.neck_joint).normalized()).norm() < 1e-10);
  }
}

TEST_CASE("degenerate skeleton is rejected") {
  Skeleton sk;
  sk.neck_joint = sk.head_joint = Vec3(1, 1, 1);
  CHECK_THROWS_AS(scan_frame_from_skeleton(sk, Pose()), ContractViolation);
}

TEST_CASE("noiseless synthetic cloud lies on the cylinder") {
  const PointCloud c = synth_neck_cloud(x_cylinder(), 0.0, 5000, 1);
  CHECK(c.points.size() == 5000);
  for (const Vec3& p : c.points) {
    CHECK(std::abs(radial(p) - 0.06) < 1e-12);
    CHECK(p.x() >= 0.0);
    CHECK(p.x() <= 0.2);
  }
}

TEST_CASE("synthetic noise has the requested spread") {
  const PointCloud c = synth_neck_cloud(x_cylinder(), 0.002, 10000, 2);
  double s = 0.0, s2 = 0.0;
  for (const Vec3& p : c.points) {
    const double d = radial(p) - 0.06;
    s += d;
    s2 += d * d;
  }
  const double n = 10000.0;
  const double sd = std::sqrt(s2 / n - (s / n) * (s / n));
  CHECK(sd >= 0.0018);
  CHECK(sd <= 0.0022);
}

TEST_CASE("synthetic cloud is reproducible and rejects empty requests") {
  const auto a = synth_neck_cloud(x_cylinder(), 0.001, 100, 9);
  const auto b = synth_neck_cloud(x_cylinder(), 0.001, 100, 9);
  for (std::size_t i = 0; i < 100; ++i) CHECK(a.points[i] == b.points[i]);
  CHECK_THROWS_AS(synth_neck_cloud(x_cylinder(), 0.001, 0, 1), ContractViolation);
}

TEST_CASE("segmentation matches a brute-force predicate") {
  const ScanFrame f = identity_frame();
  std::mt19937_64 rng(6);
  PointCloud c;
  for (int k = 0; k < 3000; ++k) c.points.push_back(test::random_vec(3, rng, 0.25));
  // Exact boundary points are kept.
  c.points.emplace_back(0.1, 0.15, 0.0);
  c.points.emplace_back(-0.02, 0.0, -0.15);
  const PointCloud s = segment_cylinder(c, f, 0.15, 0.1, -0.02);
  std::vector<Vec3> expect;
  for (const Vec3& p : c.points) {
    if (std::sqrt(p.y() * p.y() + p.z() * p.z()) <= 0.15 && p.x() >= -0.02 && p.x() <= 0.1) {
      expect.push_back(p);
    }
  }
  REQUIRE(s.points.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(s.points[i] == expect[i]);
  CHECK(s.points.back() == Vec3(-0.02, 0.0, -0.15));
}

TEST_CASE("segmentation keeps everything inside and fails on an empty view") {
  const ScanFrame f = identity_frame();
  const PointCloud c = synth_neck_cloud(x_cylinder(0.06, 0.1), 0.0, 500, 3);
  CHECK(segment_cylinder(c, f, 0.15, 0.1, 0.0).points.size() == 500);
  PointCloud far;
  far.points.emplace_back(5, 5, 5);
  CHECK_THROWS_AS(segment_cylinder(far, f, 0.15, 0.1, -0.02), PerceptionError);
}

TEST_CASE("MLS reproduces a plane") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  const Vec3 n = Vec3(0.2, -0.3, 1.0).normalized();
  const Vec3 a = n.unitOrthogonal();
  const Vec3 b = n.cross(a);
  PointCloud c;
  for (int k = 0; k < 2000; ++k) c.points.push_back(Vec3(0.1, 0.2, 0.3) + u(rng) * a + u(rng) * b);
  const MlsResult r = mls_smooth(c, 0.025, 2);
  REQUIRE(r.cloud.points.size() == c.points.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    worst = std::max(worst, (r.cloud.points[i] - c.points[i]).norm());
  }
  CHECK(worst < 1e-9);
  CHECK(r.dropped == 0);
}

TEST_CASE("MLS drops isolated points") {
  PointCloud c = synth_neck_cloud(x_cylinder(), 0.0, 4000, 8);
  c.points.emplace_back(3.0, 3.0, 3.0);
  const MlsResult r = mls_smooth(c, 0.025, 2);
  CHECK(r.dropped >= 1);
  for (const Vec3& p : r.cloud.points) CHECK(p.norm() < 1.0);
}

TEST_CASE("MLS halves the radial error of a noisy cylinder") {
  const PointCloud noisy = synth_neck_cloud(x_cylinder(), 0.002, 20000, 10);
  const MlsResult r = mls_smooth(noisy, 0.025, 2);
  // Ignore the open ends, where the neighbourhood is one-sided.
  const double before = rms_radial_error(noisy, 0.06, 0.03, 0.17);
  const double after = rms_radial_error(r.cloud, 0.06, 0.03, 0.17);
  MESSAGE("rms radial error " << before << " -> " << after);
  CHECK(after <= 0.5 * before);
}

TEST_CASE("trajectory on a noiseless cylinder follows the offset intersection line") {
  const ScanFrame f = identity_frame();
  const PointCloud cloud = synth_neck_cloud(x_cylinder(), 0.0, 20000, 11);
  TrajectoryOptions opt;
  opt.x_min = 0.02;
  opt.x_max = 0.18;
  const ScanTrajectory t = generate_trajectory(cloud, f, 100, 0.03, opt);
  REQUIRE(t.poses.size() == 100);
  // Plane z = 0 meets the cylinder in the line y = r; 3 cm inward is y = 0.03.
  double worst = 0.0, worst_dot = 0.0;
  for (const Pose& p : t.poses) {
    worst = std::max(worst, std::hypot(p.p.y() - 0.03, p.p.z()));
    const Vec3 outward = Vec3::UnitY();
    worst_dot = std::max(worst_dot, std::abs(p.rotation().col(2).dot(outward) + 1.0));
    CHECK(std::abs(p.r.norm() - 1.0) < 1e-12);
  }
  CHECK(worst < 0.002);
  CHECK(worst_dot < 1e-6);
  CHECK(t.poses.front().p.x() == doctest::Approx(0.02).epsilon(0.05));
  CHECK(t.poses.back().p.x() == doctest::Approx(0.18).epsilon(0.02));
  // Probe x follows the direction of travel.
  CHECK(t.poses[50].rotation().col(0).x() > 0.999);
}

TEST_CASE("trajectory spacing is uniform in arc length") {
  const ScanFrame f = identity_frame();
  const PointCloud cloud = synth_neck_cloud(x_cylinder(), 0.0, 20000, 12);
  TrajectoryOptions opt;
  opt.x_min = 0.02;
  opt.x_max = 0.18;
  const ScanTrajectory t = generate_trajectory(cloud, f, 50, 0.03, opt);
  double total = 0.0;
  std::vector<double> gaps;
  for (std::size_t i = 1; i < t.poses.size(); ++i) {
    gaps.push_back((t.poses[i].p - t.poses[i - 1].p).norm());
    total += gaps.back();
  }
  const double mean = total / static_cast<double>(gaps.size());
  for (double g : gaps) CHECK(std::abs(g - mean) <= 0.05 * mean);
}

TEST_CASE("two-point trajectory spans the intersection segment") {
  const ScanFrame f = identity_frame();
  const PointCloud cloud = synth_neck_cloud(x_cylinder(), 0.0, 20000, 13);
  TrajectoryOptions opt;
  opt.x_min = 0.05;
  opt.x_max = 0.15;
  const ScanTrajectory t = generate_trajectory(cloud, f, 2, 0.03, opt);
  REQUIRE(t.poses.size() == 2);
  CHECK(std::abs(t.poses[0].p.x() - 0.05) < 0.002);
  CHECK(std::abs(t.poses[1].p.x() - 0.15) < 0.002);
}

TEST_CASE("trajectory generation fails without surface points") {
  const ScanFrame f = identity_frame();
  PointCloud c;
  c.points.emplace_back(0.1, -0.06, 0.0);
  CHECK_THROWS_AS(generate_trajectory(c, f, 10, 0.03), PerceptionError);
  CHECK_THROWS_AS(generate_trajectory(c, f, 1, 0.03), ContractViolation);
}

TEST_CASE("transforming a trajectory and back is the identity") {
  const ScanFrame f = identity_frame();
  const PointCloud cloud = synth_neck_cloud(x_cylinder(), 0.0, 20000, 14);
  TrajectoryOptions opt;
  opt.x_min = 0.02;
  opt.x_max = 0.18;
  const ScanTrajectory t = generate_trajectory(cloud, f, 20, 0.03, opt);
  RigidTransform T;
  T.R = Eigen::AngleAxisd(0.7, Vec3(1, 1, 0).normalized()).toRotationMatrix();
  T.t = Vec3(0.3, -0.2, 0.5);
  const ScanTrajectory back = transform_trajectory(transform_trajectory(t, T), T.inverse());
  for (std::size_t i = 0; i < t.poses.size(); ++i) {
    CHECK((back.poses[i].p - t.poses[i].p).norm() < 1e-14);
    CHECK(back.poses[i].r.angularDistance(t.poses[i].r) < 1e-7);
  }
}

TEST_CASE("XYZ files round-trip exactly") {
  const auto dir = test::scratch_dir("xyz");
  const PointCloud c = synth_neck_cloud(x_cylinder(), 0.001, 200, 15);
  write_xyz(c, dir / "c.xyz");
  const PointCloud r = read_xyz(dir / "c.xyz");
  REQUIRE(r.points.size() == c.points.size());
  for (std::size_t i = 0; i < c.points.size(); ++i) CHECK(r.points[i] == c.points[i]);
  std::ofstream(dir / "bad.xyz") << "1 2\n";
  CHECK_THROWS(read_xyz(dir / "bad.xyz"));
}
