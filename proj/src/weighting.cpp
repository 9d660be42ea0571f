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

#include "mmic/weighting.hpp"

#include <cmath>

namespace mmic {

double basic_b(double s) {
  if (s < 0.0) return 1.0;
  const double s2 = s * s;
  return 1.0 / (1.0 + s2 * s2 * s2);
}

double basic_b_lipschitz() {
  const double s = std::pow(5.0 / 7.0, 1.0 / 6.0);
  const double s6 = std::pow(s, 6.0);
  return 6.0 * std::pow(s, 5.0) / ((1.0 + s6) * (1.0 + s6));
}

void WeightingParams::validate() const {
  if (!(r_h > 0.0)) throw ContractViolation("weighting: r_h must be positive");
  if (!(r_p > 0.0)) throw ContractViolation("weighting: r_p must be positive");
  if (!(f0 > 0.0)) throw ContractViolation("weighting: f0 must be positive");
  if (!(x_top > x_bottom)) throw ContractViolation("weighting: x_top must exceed x_bottom");
}

double compute_a_h(const Vec3& d_h, const WeightingParams& params) {
  return basic_b(d_h.norm() / params.r_h);
}

double compute_a_p(const Vec3& d_p, const WeightingParams& params) {
  const double radial = std::hypot(d_p.y(), d_p.z()) / params.r_p;
  const double centre = 0.5 * (params.x_top + params.x_bottom);
  const double half = 0.5 * (params.x_top - params.x_bottom);
  const double axial = std::abs(d_p.x() - centre) / half;
  return basic_b(radial) * basic_b(axial);
}

double compute_a_f(double f_z_ee, const WeightingParams& params) {
  if (f_z_ee <= 0.0) return 0.0;
  return 1.0 - basic_b(f_z_ee / params.f0);
}

}  // namespace mmic
