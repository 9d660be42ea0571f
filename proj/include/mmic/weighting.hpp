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

#include "mmic/robot_core.hpp"

namespace mmic {

/// Smooth step from 1 to 0: 1 for s < 0, 1 / (1 + s^6) otherwise.
double basic_b(double s);

/// Largest |db/ds|, attained at s = (5/7)^(1/6).
double basic_b_lipschitz();

struct WeightingParams {
  double r_h = 0.2;        // m, hand proximity radius
  double r_p = 0.15;       // m, patient region radius
  double x_top = 0.1;      // m, region extent along scan x
  double x_bottom = -0.02; // m
  double f0 = 12.5;        // N, contact force threshold

  void validate() const;
};

/// Each factor lies in [0, 1].
struct WeightingFactors {
  double a_h = 0.0;  // probe grasped by a hand
  double a_p = 0.0;  // probe close to the patient region
  double a_f = 0.0;  // probe in contact
};

/// d_h: vector from probe to the nearest hand.
double compute_a_h(const Vec3& d_h, const WeightingParams& params);

/// d_p: probe position in the scan reference frame. Product of a radial
/// term about the scan x-axis and an axial term centred between x_bottom
/// and x_top.
double compute_a_p(const Vec3& d_p, const WeightingParams& params);

/// f_z_ee: pressing force along the probe z-axis, frame {E}.
double compute_a_f(double f_z_ee, const WeightingParams& params);

}  // namespace mmic
