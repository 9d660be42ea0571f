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
 * @file sim.hpp
 * @brief Closed-loop scanning simulation: scripted patient and doctor,
 *        penalty contact with the neck, the multi-modal controller and the
 *        arm dynamics, stepped on a single fixed clock.
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmic/controller.hpp"
#include "mmic/mode_machine.hpp"
#include "mmic/perception.hpp"
#include "mmic/robot_core.hpp"
#include "mmic/weighting.hpp"

namespace mmic {

/// Neck cylinder used for contact. Axis along the local x-axis of `pose`,
/// covering x in [0, length].
struct ContactSurface {
  CylinderGeometry geometry;
  double k_env = 5000.0;  // N/m
  double d_env = 50.0;    // N s/m
};

/// Unilateral penalty contact at the probe tip. Zero outside the skin;
/// inside, (k_env d + d_env max(0, d')) along the outward normal.
Wrench contact_wrench(const Pose& probe, const Twist& probe_twist, const ContactSurface& surface);

/// Penetration depth of a point (m, 0 when outside).
double penetration_depth(const Vec3& p, const CylinderGeometry& geometry);

enum class EventKind {
  PatientTurnHead,
  PatientTranslate,
  PatientDodge,
  PatientPush,
  HandGrab,
  HandRelease,
  ApplyGelPause,
  PatientAbsent,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

struct ScenarioEvent {
  double t_start = 0.0;
  double t_end = 0.0;
  EventKind kind = EventKind::PatientPush;
  // head turn: rad; dodge: m; push: N; grab and gel pause: outward lift, m
  double magnitude = 0.0;
  std::optional<Vec3> direction;  // dodge, push; base frame
  std::optional<Vec3> offset;     // translate, grab guide displacement; base frame
  std::optional<Vec3> force;      // grab: constant hand force instead of guiding
  double approach_s = 0.2;        // hand: reach-in time before t_start
  double release_s = 0.3;         // hand: retract time after release
  double move_s = 2.0;            // hand: guide motion time
};

struct PatientConfig {
  double cylinder_radius = 0.06;  // m
  double cylinder_length = 0.2;   // m
  double axis_start = -0.05;      // m, cylinder start along the neck axis
  double head_offset = 0.15;      // m, head joint along the neck axis
  // Neck joint frame, x along the neck axis, y towards the artery side.
  Pose base_pose{Vec3(0.5, -0.04, 0.15), Quat(0.5, 0.5, 0.5, 0.5)};
};

struct TaskConfig {
  double T = 30.0;          // s
  int N_pts = 100;
  double T_rec = 8.0;       // s
  double skin_offset = 0.03;
};

struct PerceptionConfig {
  std::size_t cloud_points = 20000;
  double noise_sd = 0.001;    // m
  double mls_support = 0.025; // m
  double r_cyl = 0.15;        // m, segmentation radius
  TrajectoryOptions trajectory{0.003, 0.005, 0.075, 0.002, 0.025};
};

struct HandConfig {
  Vec3 standby = Vec3(0.5, 0.5, 0.3);
  double kp = 200.0;       // N/m
  double kd = 40.0;        // N s/m
  double max_force = 20.0; // N
};

enum class StartPose { Home, TrajectoryStart, Explicit };

struct StartConfig {
  StartPose pose = StartPose::Home;
  double offset = 0.028;  // m, outward from the first trajectory point
  VecX q0;
};

struct Scenario {
  std::string name = "scenario";
  double duration = 120.0;  // s, simulated time cap
  double dt = kDefaultTimeStep;
  std::uint64_t seed = 1;
  std::vector<ScenarioEvent> events;
  PatientConfig patient;
  TaskConfig task;
  ImpedanceParams gains = ImpedanceParams::defaults(7);
  Thresholds thresholds;
  WeightingParams weighting;
  ContactSurface contact;
  PerceptionConfig perception;
  HandConfig hand;
  StartConfig start;
  std::optional<Vec6> f_max;  // overrides the robot's limit

  /// Throws ContractViolation naming the first broken invariant.
  void validate(int dof) const;
};

/// Hand state at time t: its position, the wrench it applies on the probe
/// and whether it holds the probe. Guided grabs pull with a saturated PD
/// law towards the grab pose shifted by the event offset.
struct HandSample {
  Vec3 position;
  Wrench wrench;
  bool attached = false;
};

/// One row per tick.
struct LogRecord {
  double t = 0.0;
  Mode mode = Mode::Waiting;
  WeightingFactors w;
  Vec6 K_d = Vec6::Zero();
  Vec6 x_tilde = Vec6::Zero();
  Pose x_d;
  double f_z = 0.0;            // N, pressing force along probe z, frame {E}
  Vec6 f_e = Vec6::Zero();     // base frame
  VecX u;
  double res_task = 0.0;       // norm of the task-space impedance residual
  double res_null = 0.0;       // norm of the null-space residual
  double qdd_norm = 0.0;
  double t_p = 0.0;
  int traj_index = 0;
  double track_err = 0.0;      // m, distance to the current trajectory point
  double phi = 0.0;            // recovery phase
  bool contact = false;
  Vec3 p = Vec3::Zero();
  bool near_singular = false;
};

enum class Termination { Complete, Duration, EmergencyStop };
std::string_view to_string(Termination t);

struct ModeTransition {
  double t;
  Mode from;
  Mode to;
};

struct RunSummary {
  Termination termination = Termination::Duration;
  std::int64_t ticks = 0;
  double mode_seconds[4] = {0.0, 0.0, 0.0, 0.0};  // indexed by Mode
  std::vector<Mode> visit_order;                  // first visits
  std::vector<ModeTransition> transitions;
  double max_abs_f_z = 0.0;
  double max_track_err = 0.0;     // translational ||x~||
  double max_res_task = 0.0;
  double max_res_null = 0.0;
  double t_p = 0.0;
  double end_time = 0.0;
  std::int64_t torque_clamps = 0;
  std::int64_t joint_clamps = 0;
  std::int64_t near_singular_ticks = 0;
  std::string diagnostic;  // emergency-stop detail
};

struct RunResult {
  std::vector<LogRecord> log;
  RunSummary summary;
  ScanTrajectory trajectory;  // base frame, at capture
};

/// Scripted doctor hand. The grab pose is latched on the first sample
/// inside a grab window, so samples must be requested in time order.
class HandModel {
 public:
  HandModel(const std::vector<ScenarioEvent>& events, const HandConfig& config);

  HandSample sample(double t, const Pose& probe, const Twist& probe_twist);

 private:
  struct Grab {
    double t_start, t_release, approach_s, release_s, move_s;
    std::optional<Vec3> offset;      // guide displacement, base frame
    std::optional<Vec3> force;       // constant force instead of guiding
    double outward_lift = 0.0;       // m along -z of the probe at grab start
    std::optional<Pose> grab_pose;
  };
  std::vector<Grab> grabs_;
  HandConfig config_;
};

RunResult run_scenario(const RobotModel& model, const Scenario& scenario);

// CSV with a fixed header (docs/formats.md) and %.17g numbers.
void write_run_csv(const RunResult& run, const std::filesystem::path& path);
void write_summary_json(const RunResult& run, const Scenario& scenario,
                        const std::filesystem::path& path);

}  // namespace mmic
