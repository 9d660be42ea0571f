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

#include <filesystem>
#include <random>
#include <string>

#include "mmic/robot_core.hpp"

namespace mmic::test {

// Uniform configuration inside the joint limits, shrunk by a margin.
inline VecX random_q(const RobotModel& m, std::mt19937_64& rng, double margin = 0.1) {
  VecX q(m.dof());
  for (int i = 0; i < m.dof(); ++i) {
    const auto& l = m.joint_limits[i];
    std::uniform_real_distribution<double> u(l.lower + margin, l.upper - margin);
    q[i] = u(rng);
  }
  return q;
}

inline VecX random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VecX v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

// Rotation vector of a * b^-1.
inline Vec3 rotvec(const Mat3& a, const Mat3& b) {
  const Eigen::AngleAxisd aa(Mat3(a * b.transpose()));
  return aa.axis() * aa.angle();
}

inline double inf_norm(const MatX& m) { return m.cwiseAbs().maxCoeff(); }

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mmic_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path source_path(const std::string& rel) {
  return std::filesystem::path(MMIC_SOURCE_DIR) / rel;
}

}  // namespace mmic::test
