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

#include "mmic/mode_machine.hpp"

#include <algorithm>
#include <cmath>

namespace mmic {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Waiting:
      return "waiting";
    case Mode::Scanning:
      return "scanning";
    case Mode::Recovery:
      return "recovery";
    case Mode::HumanGuided:
      return "human_guided";
  }
  return "unknown";
}

std::optional<Mode> mode_from_string(std::string_view name) {
  for (Mode m : kAllModes) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

void Thresholds::validate() const {
  auto unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!unit(a_ht) || !unit(a_ft) || !unit(a_pt)) {
    throw ContractViolation("threshold out of (0,1)");
  }
  if (!(eps > 0.0)) throw ContractViolation("tracking error bound eps must be positive");
}

bool scanning_condition(const WeightingFactors& w, double tracking_err,
                        const Thresholds& th) {
  const bool close = tracking_err < th.eps;
  const bool near = w.a_p > th.a_pt;
  const bool contact = w.a_f > th.a_ft;
  switch (th.condition) {
    case ScanCondition::PositionAndProximityOrForce:
      return (close && near) || contact;
    case ScanCondition::PositionAndEither:
      return close && (near || contact);
  }
  return false;
}

Mode select_mode(const WeightingFactors& w, double tracking_err, bool has_traj,
                 const Thresholds& th, [[maybe_unused]] Mode prev) {
  if (w.a_h >= th.a_ht) return Mode::HumanGuided;
  if (!has_traj) return Mode::Waiting;
  if (scanning_condition(w, tracking_err, th)) return Mode::Scanning;
  return Mode::Recovery;
}

double TaskProgress::t_p() const {
  return std::min(T, start + static_cast<double>(scanning_ticks) * dt);
}

bool TaskProgress::complete() const {
  return start + static_cast<double>(scanning_ticks) * dt >= T - 1e-9;
}

TaskProgress advance_progress(TaskProgress p, Mode mode) {
  if (mode == Mode::Scanning && !p.complete()) ++p.scanning_ticks;
  return p;
}

int trajectory_index(double t_p, double T, int N_pts) {
  if (!(T > 0.0) || N_pts < 1) throw ContractViolation("trajectory_index: T > 0 and N >= 1 required");
  const double raw = std::nearbyint(t_p * N_pts / T);
  return static_cast<int>(std::clamp(raw, 1.0, static_cast<double>(N_pts)));
}

ModeDirectives directives_for(Mode mode, const Vec6& K_g, const VecX& K_gn) {
  switch (mode) {
    case Mode::Scanning:
      return {PoseSource::ScanTrajectory, PosturePolicy::Nominal, K_g, K_gn};
    case Mode::Recovery:
      return {PoseSource::RecoveryPlan, PosturePolicy::ResampleEvery100Cycles, K_g, K_gn};
    case Mode::HumanGuided:
      return {PoseSource::CurrentPose, PosturePolicy::CurrentQ, Vec6::Zero(),
              VecX::Zero(K_gn.size())};
    case Mode::Waiting:
      return {PoseSource::FrozenPose, PosturePolicy::FrozenQ, K_g, K_gn};
  }
  throw ContractViolation("directives_for: unknown mode");
}

}  // namespace mmic
