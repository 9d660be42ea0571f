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

#include <cstdint>
#include <optional>
#include <string_view>

#include "mmic/robot_core.hpp"
#include "mmic/weighting.hpp"

namespace mmic {

enum class Mode { Waiting, Scanning, Recovery, HumanGuided };

inline constexpr Mode kAllModes[] = {Mode::Waiting, Mode::Scanning, Mode::Recovery,
                                     Mode::HumanGuided};

std::string_view to_string(Mode mode);
std::optional<Mode> mode_from_string(std::string_view name);

/// How the scanning condition combines its three comparisons.
enum class ScanCondition {
  /// ((err < eps) and (a_p > a_pt)) or (a_f > a_ft). Default.
  PositionAndProximityOrForce,
  /// (err < eps) and ((a_p > a_pt) or (a_f > a_ft)).
  PositionAndEither,
};

struct Thresholds {
  double a_ht = 0.8;
  double a_ft = 0.5;
  double a_pt = 0.9;
  double eps = 0.05;  // m, translational tracking error bound
  ScanCondition condition = ScanCondition::PositionAndProximityOrForce;

  void validate() const;
};

bool scanning_condition(const WeightingFactors& w, double tracking_err,
                        const Thresholds& th);

/// Priority: grasp, then missing trajectory, then the scanning condition,
/// otherwise recovery. `prev` is accepted so callers can replay logs; the
/// decision itself has no hysteresis.
Mode select_mode(const WeightingFactors& w, double tracking_err, bool has_traj,
                 const Thresholds& th, Mode prev);

/// Progress through the scanning task. t_p only moves while Scanning and is
/// kept as start + ticks * dt so its increase is exactly dt per Scanning tick.
struct TaskProgress {
  double T = 30.0;   // s, task time
  int N_pts = 100;   // trajectory points
  double dt = kDefaultTimeStep;
  double start = 0.0;
  std::int64_t scanning_ticks = 0;

  double t_p() const;
  bool complete() const;
};

TaskProgress advance_progress(TaskProgress p, Mode mode);

/// Nearest integer of t_p N / T, clamped to [1, N_pts] (1-based).
int trajectory_index(double t_p, double T, int N_pts);

enum class PoseSource { ScanTrajectory, RecoveryPlan, CurrentPose, FrozenPose };
enum class PosturePolicy { Nominal, ResampleEvery100Cycles, CurrentQ, FrozenQ };

inline constexpr int kPostureResampleCycles = 100;

/// One row of the per-mode table: where x_d and q_dn come from and the
/// stiffness the row prescribes at its corner weighting values.
struct ModeDirectives {
  PoseSource x_d_source;
  PosturePolicy q_dn_policy;
  Vec6 K_d;
  VecX K_dn;
};

ModeDirectives directives_for(Mode mode, const Vec6& K_g, const VecX& K_gn);

}  // namespace mmic
