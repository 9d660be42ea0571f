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

#include "mmic/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "mmic/planner.hpp"

namespace mmic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Mat3 rot_x(double a) { return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix(); }

Vec3 rotation_vector(const Quat& a, const Quat& b) {
  const Quat e = canonical(a * b.conjugate());
  const Eigen::AngleAxisd aa(e);
  return aa.axis() * aa.angle();
}

struct PatientState {
  bool present = true;
  Mat3 R = Mat3::Identity();  // neck frame at zero head rotation
  Vec3 neck = Vec3::Zero();
  double alpha_head = 0.0;
};

class PatientScript {
 public:
  PatientScript(const Scenario& sc) : sc_(sc) {}

  double alpha_head(double t) const {
    double a = 0.0;
    for (const auto& e : sc_.events) {
      if (e.kind == EventKind::PatientTurnHead) a += e.magnitude * ramp(e, t);
    }
    return a;
  }

  PatientState at(double t) const {
    PatientState s;
    s.R = sc_.patient.base_pose.rotation();
    s.neck = sc_.patient.base_pose.p;
    s.alpha_head = alpha_head(t);
    for (const auto& e : sc_.events) {
      switch (e.kind) {
        case EventKind::PatientAbsent:
          if (t >= e.t_start && t < e.t_end) s.present = false;
          break;
        case EventKind::PatientTranslate:
          s.neck += ramp(e, t) * e.offset.value_or(Vec3::Zero());
          break;
        case EventKind::PatientDodge:
          s.neck += ramp(e, t) * e.magnitude * dodge_direction(e);
          break;
        default:
          break;
      }
    }
    return s;
  }

  // Away from the probe: against the scan y-axis at the start of the dodge.
  Vec3 dodge_direction(const ScenarioEvent& e) const {
    if (e.direction) return e.direction->normalized();
    const Mat3 R = sc_.patient.base_pose.rotation() * rot_x(alpha_head(e.t_start));
    return -R.col(1);
  }

  CylinderGeometry cylinder(const PatientState& s) const {
    CylinderGeometry g;
    g.radius = sc_.patient.cylinder_radius;
    g.length = sc_.patient.cylinder_length;
    g.pose.R = s.R;
    g.pose.t = s.neck + sc_.patient.axis_start * s.R.col(0);
    return g;
  }

 private:
  static double ramp(const ScenarioEvent& e, double t) {
    return phase(t, e.t_start, e.t_end - e.t_start);
  }
  const Scenario& sc_;
};

Wrench push_wrench(double t, const std::vector<ScenarioEvent>& events, const Pose& probe) {
  Wrench w;
  for (const auto& e : events) {
    if (e.kind != EventKind::PatientPush || t < e.t_start || t >= e.t_end) continue;
    const Vec3 dir = e.direction ? e.direction->normalized() : Vec3(-probe.rotation().col(2));
    w.f += e.magnitude * dir;
  }
  return w;
}

// Pressing force along the probe axis, positive into the skin.
double pressing_force(const Vec6& f_e_base, const Pose& probe) {
  return -probe.rotation().col(2).dot(f_e_base.head<3>());
}

}  // namespace

double penetration_depth(const Vec3& p, const CylinderGeometry& g) {
  const Vec3 local = g.pose.R.transpose() * (p - g.pose.t);
  if (local.x() < 0.0 || local.x() > g.length) return 0.0;
  const double rho = std::hypot(local.y(), local.z());
  return std::max(0.0, g.radius - rho);
}

Wrench contact_wrench(const Pose& probe, const Twist& twist, const ContactSurface& s) {
  Wrench w;
  const double d = penetration_depth(probe.p, s.geometry);
  if (d <= 0.0) return w;
  const Vec3 local = s.geometry.pose.R.transpose() * (probe.p - s.geometry.pose.t);
  const double rho = std::hypot(local.y(), local.z());
  const Vec3 n_local = rho > 1e-12 ? Vec3(0.0, local.y() / rho, local.z() / rho) : Vec3::UnitY();
  const Vec3 n = s.geometry.pose.R * n_local;
  const double rate = -twist.v.dot(n);
  w.f = (s.k_env * d + s.d_env * std::max(0.0, rate)) * n;
  return w;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PatientTurnHead: return "patient_turn_head";
    case EventKind::PatientTranslate: return "patient_translate";
    case EventKind::PatientDodge: return "patient_dodge";
    case EventKind::PatientPush: return "patient_push";
    case EventKind::HandGrab: return "hand_grab";
    case EventKind::HandRelease: return "hand_release";
    case EventKind::ApplyGelPause: return "apply_gel_pause";
    case EventKind::PatientAbsent: return "patient_absent";
  }
  return "unknown";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  for (EventKind k : {EventKind::PatientTurnHead, EventKind::PatientTranslate,
                      EventKind::PatientDodge, EventKind::PatientPush, EventKind::HandGrab,
                      EventKind::HandRelease, EventKind::ApplyGelPause,
                      EventKind::PatientAbsent}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Complete: return "complete";
    case Termination::Duration: return "duration";
    case Termination::EmergencyStop: return "emergency_stop";
  }
  return "unknown";
}

void Scenario::validate(int dof) const {
  if (!(dt > 0.0)) throw ContractViolation("dt_s must be positive");
  if (!(duration > 0.0)) throw ContractViolation("duration_s must be positive");
  if (!(task.T > 0.0)) throw ContractViolation("task.T_s must be positive");
  if (!(task.T_rec > 0.0)) throw ContractViolation("task.T_rec_s must be positive");
  if (task.N_pts < 2) throw ContractViolation("task.N_pts must be at least 2");
  if (!(task.skin_offset >= 0.0)) throw ContractViolation("task.skin_offset_m must be >= 0");
  thresholds.validate();
  weighting.validate();
  gains.validate(dof);
  if (!(patient.cylinder_radius > 0.0) || !(patient.cylinder_length > 0.0)) {
    throw ContractViolation("patient cylinder radius and length must be positive");
  }
  if (!(contact.k_env >= 0.0) || !(contact.d_env >= 0.0)) {
    throw ContractViolation("contact stiffness and damping must be >= 0");
  }
  if (perception.cloud_points == 0) throw ContractViolation("perception.cloud_points must be positive");
  if (!(perception.noise_sd >= 0.0)) throw ContractViolation("perception.noise_sd_m must be >= 0");
  if (!(perception.mls_support > 0.0)) throw ContractViolation("perception.mls_support_m must be positive");
  if (!(hand.max_force >= 0.0) || !(hand.kp >= 0.0) || !(hand.kd >= 0.0)) {
    throw ContractViolation("hand gains must be >= 0");
  }
  if (f_max && (f_max->array() <= 0.0).any()) throw ContractViolation("safety.f_max must be positive");
  if (start.pose == StartPose::Explicit && start.q0.size() != dof) {
    throw ContractViolation("start.q0 needs one entry per joint");
  }
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& e : events) {
    if (!(e.t_start < e.t_end)) {
      throw ContractViolation(std::string("event ") + std::string(to_string(e.kind)) +
                              ": t_start must be before t_end");
    }
    if (e.t_start < prev) throw ContractViolation("events must be sorted by t_start");
    prev = e.t_start;
  }
}

HandModel::HandModel(const std::vector<ScenarioEvent>& events, const HandConfig& config)
    : config_(config) {
  for (const auto& e : events) {
    if (e.kind != EventKind::HandGrab && e.kind != EventKind::ApplyGelPause) continue;
    Grab g{e.t_start, e.t_end, e.approach_s, e.release_s, e.move_s, e.offset, e.force,
           e.magnitude, std::nullopt};
    if (!g.offset && !g.force && g.outward_lift == 0.0) {
      g.outward_lift = e.kind == EventKind::ApplyGelPause ? 0.08 : 0.15;
    }
    grabs_.push_back(g);
  }
  for (const auto& e : events) {
    if (e.kind != EventKind::HandRelease) continue;
    for (auto& g : grabs_) {
      if (e.t_start >= g.t_start && e.t_start < g.t_release) {
        g.t_release = e.t_start;
        g.release_s = e.t_end - e.t_start;
      }
    }
  }
}

HandSample HandModel::sample(double t, const Pose& probe, const Twist& twist) {
  HandSample s;
  s.position = config_.standby;
  for (auto& g : grabs_) {
    if (t < g.t_start - g.approach_s || t >= g.t_release + g.release_s) continue;
    if (t < g.t_start) {
      const double u = phase(t, g.t_start - g.approach_s, g.approach_s);
      s.position = config_.standby + u * (probe.p - config_.standby);
    } else if (t < g.t_release) {
      s.attached = true;
      s.position = probe.p;
      if (!g.grab_pose) g.grab_pose = probe;
      if (g.force) {
        s.wrench.f = *g.force;
      } else {
        const Vec3 disp =
            g.offset ? *g.offset : Vec3(-g.outward_lift * g.grab_pose->rotation().col(2));
        const Vec3 target = g.grab_pose->p + phase(t, g.t_start, g.move_s) * disp;
        Vec3 f = config_.kp * (target - probe.p) - config_.kd * twist.v;
        if (f.norm() > config_.max_force) f *= config_.max_force / f.norm();
        s.wrench.f = f;
      }
    } else {
      const double u = phase(t, g.t_release, g.release_s);
      s.position = probe.p + u * (config_.standby - probe.p);
    }
    break;
  }
  return s;
}

RunResult run_scenario(const RobotModel& model, const Scenario& sc) {
  model.validate();
  sc.validate(model.dof());
  const int n = model.dof();
  const double dt = sc.dt;
  const Vec6 f_max = sc.f_max.value_or(model.f_max);
  const PatientScript patient(sc);
  HandModel hand(sc.events, sc.hand);

  RunResult result;
  RunSummary& sum = result.summary;

  // Trajectory in scan coordinates, captured when the patient shows up.
  std::optional<ScanTrajectory> traj_scan;
  std::optional<Mat3> capture_rotation;
  VecX q_nominal = model.home;

  auto frame_of = [&](const PatientState& ps) {
    Skeleton sk;
    sk.neck_joint = ps.neck;
    sk.head_joint = ps.neck + sc.patient.head_offset * ps.R.col(0);
    sk.alpha_head = ps.alpha_head;
    return scan_frame_from_skeleton(sk, Pose(ps.neck, Quat(*capture_rotation)), kAlphaArtery);
  };

  auto capture = [&](const PatientState& ps, const VecX& seed) {
    // Non-occluded capture pose: probe frame whose y-axis already points at
    // the artery when the head is straight.
    capture_rotation = ps.R * rot_x(kAlphaArtery);
    const ScanFrame frame = frame_of(ps);
    const PointCloud cloud = synth_neck_cloud(patient.cylinder(ps), sc.perception.noise_sd,
                                              sc.perception.cloud_points, sc.seed);
    const PointCloud seg = segment_cylinder(cloud, frame, sc.perception.r_cyl,
                                            sc.weighting.x_top, sc.weighting.x_bottom);
    const MlsResult smooth = mls_smooth(seg, sc.perception.mls_support, 2);
    result.trajectory = generate_trajectory(smooth.cloud, frame, sc.task.N_pts,
                                            sc.task.skin_offset, sc.perception.trajectory);
    traj_scan = transform_trajectory(result.trajectory, frame.base_from_scan.inverse());
    if (auto q = solve_ik(model, result.trajectory.poses.front(), seed, 1e-9, 5000)) {
      q_nominal = *q;
    } else {
      q_nominal = seed;
    }
  };

  JointState js;
  js.q = model.home;
  js.dq = VecX::Zero(n);
  {
    const PatientState ps0 = patient.at(0.0);
    if (sc.start.pose == StartPose::Explicit) {
      js.q = sc.start.q0;
    } else if (sc.start.pose == StartPose::TrajectoryStart) {
      if (!ps0.present) throw ContractViolation("start.pose trajectory_start needs the patient at t=0");
      capture(ps0, model.home);
      Pose start = result.trajectory.poses.front();
      start.p -= sc.start.offset * start.rotation().col(2);
      auto q = solve_ik(model, start, q_nominal, 1e-10, 5000);
      if (!q) throw ContractViolation("start pose is not reachable");
      js.q = *q;
    }
  }

  TaskProgress progress;
  progress.T = sc.task.T;
  progress.N_pts = sc.task.N_pts;
  progress.dt = dt;

  Mode prev_mode = Mode::Waiting;
  bool first = true;
  Pose frozen_pose;
  VecX frozen_q = js.q;
  MinJerkPlan plan;
  Pose recovery_target;
  VecX recovery_q = js.q;
  std::int64_t recovery_ticks = 0;
  std::optional<Pose> x_prev;
  std::vector<LimitEvent> limit_events;

  const auto max_ticks = static_cast<std::int64_t>(std::llround(sc.duration / dt));
  for (std::int64_t k = 0; k < max_ticks; ++k) {
    const double t = static_cast<double>(k) * dt;

    // Patient, scan frame and trajectory.
    const PatientState ps = patient.at(t);
    if (ps.present && !traj_scan) capture(ps, js.q);
    const bool has_traj = ps.present && traj_scan.has_value();
    std::optional<ScanFrame> frame;
    if (ps.present && capture_rotation) frame = frame_of(ps);

    int index = 0;
    Pose x_traj;
    if (has_traj) {
      index = trajectory_index(progress.t_p(), progress.T, progress.N_pts);
      x_traj = frame->base_from_scan.apply(traj_scan->poses[static_cast<std::size_t>(index - 1)]);
    }

    // Robot state and external wrench.
    const ControlTerms terms = compute_control_terms(model, js);
    const Pose& x = terms.dyn.pose;
    const Twist twist = Twist::from(terms.dyn.J * js.dq);
    Wrench contact;
    if (ps.present) {
      ContactSurface surface = sc.contact;
      surface.geometry = patient.cylinder(ps);
      // Relative velocity: subtract the surface motion.
      const PatientState ahead = patient.at(t + dt);
      const PatientState behind = patient.at(std::max(0.0, t - dt));
      const Vec3 v_surface = (ahead.neck - behind.neck) / (t >= dt ? 2.0 * dt : dt);
      Twist rel = twist;
      rel.v -= v_surface;
      contact = contact_wrench(x, rel, surface);
    }
    const HandSample hs = hand.sample(t, x, twist);
    const Wrench f_e = contact + hs.wrench + push_wrench(t, sc.events, x);
    const Vec6 f = f_e.stacked();

    for (int i = 0; i < 6; ++i) {
      if (std::abs(f[i]) > f_max[i]) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "emergency stop at t=" << t << " s: |f_e[" << i << "]| = " << std::abs(f[i])
            << " exceeds f_max = " << f_max[i];
        sum.termination = Termination::EmergencyStop;
        sum.diagnostic = msg.str();
        break;
      }
    }
    if (sum.termination == Termination::EmergencyStop) break;

    // Weighting factors and mode.
    WeightingFactors w;
    w.a_h = compute_a_h(hs.position - x.p, sc.weighting);
    w.a_p = frame ? compute_a_p(frame->to_scan(x.p), sc.weighting) : 0.0;
    const double f_z = pressing_force(f, x);
    w.a_f = compute_a_f(f_z, sc.weighting);
    const double track_err = has_traj ? (x.p - x_traj.p).norm() : 0.0;
    const Mode mode = select_mode(w, track_err, has_traj, sc.thresholds, prev_mode);
    const bool entered = first || mode != prev_mode;

    // Desired state.
    const Stiffness stiff = update_stiffness(w, sc.gains);
    ControllerState ctrl;
    ctrl.K_d = stiff.K_d;
    ctrl.K_dn = stiff.K_dn;
    double phi = 0.0;
    switch (mode) {
      case Mode::Scanning:
        ctrl.x_d = x_traj;
        ctrl.q_dn = q_nominal;
        break;
      case Mode::Recovery:
        recovery_target = x_traj;
        if (entered) {
          plan = MinJerkPlan(t, sc.task.T_rec, x, [&recovery_target](double) {
            return recovery_target;
          });
          recovery_ticks = 0;
        }
        if (recovery_ticks % kPostureResampleCycles == 0) recovery_q = js.q;
        ++recovery_ticks;
        ctrl.x_d = plan_pose(plan, t);
        ctrl.xd_dot = plan_velocity(plan, t);
        ctrl.xd_ddot = plan_acceleration(plan, t);
        ctrl.q_dn = recovery_q;
        phi = phase(t, plan.t_i, plan.T_rec);
        break;
      case Mode::HumanGuided:
        ctrl.x_d = x;
        ctrl.q_dn = js.q;
        break;
      case Mode::Waiting:
        if (entered) {
          frozen_pose = x;
          frozen_q = js.q;
        }
        ctrl.x_d = frozen_pose;
        ctrl.q_dn = frozen_q;
        break;
    }

    // Control and plant.
    const Command cmd = command_acceleration(terms, js, ctrl, sc.gains);
    limit_events.clear();
    const VecX u = control_torque(model, terms, js, cmd.qdd_c, f_e, sc.gains, &limit_events);
    const VecX qdd = forward_dynamics(model, terms.dyn, js, u, f_e, &limit_events);
    const VecX res_null = null_space_residual(terms.N, js, qdd, sc.gains.K_vn, ctrl.K_dn,
                                              js.q - ctrl.q_dn);
    const JointState next = integrate(model, js, qdd, dt, &limit_events);
    for (const auto& ev : limit_events) {
      if (ev.kind == LimitEvent::Kind::TorqueClamp) ++sum.torque_clamps;
      else ++sum.joint_clamps;
    }

    // Task-space impedance residual with second differences of the pose.
    double res_task = kNaN;
    if (x_prev) {
      const Pose x_next = forward_kinematics(model, next.q);
      Vec6 acc;
      acc.head<3>() = (x_next.p - 2.0 * x.p + x_prev->p) / (dt * dt);
      acc.tail<3>() = (rotation_vector(x_next.r, x.r) - rotation_vector(x.r, x_prev->r)) / (dt * dt);
      const Vec6 xt_dd = acc - ctrl.xd_ddot.stacked();
      res_task = task_impedance_residual(xt_dd, cmd.x_tilde_dot, cmd.x_tilde, ctrl.K_d, f,
                                         sc.gains)
                     .norm();
    }

    progress = advance_progress(progress, mode);

    LogRecord rec;
    rec.t = t;
    rec.mode = mode;
    rec.w = w;
    rec.K_d = ctrl.K_d;
    rec.x_tilde = cmd.x_tilde;
    rec.x_d = ctrl.x_d;
    rec.f_z = f_z;
    rec.f_e = f;
    rec.u = u;
    rec.res_task = res_task;
    rec.res_null = res_null.norm();
    rec.qdd_norm = qdd.norm();
    rec.t_p = progress.t_p();
    rec.traj_index = index;
    rec.track_err = track_err;
    rec.phi = phi;
    rec.contact = contact.f.squaredNorm() > 0.0;
    rec.p = x.p;
    rec.near_singular = cmd.near_singular;
    result.log.push_back(std::move(rec));

    if (entered) {
      if (!first) sum.transitions.push_back({t, prev_mode, mode});
      if (std::find(sum.visit_order.begin(), sum.visit_order.end(), mode) == sum.visit_order.end()) {
        sum.visit_order.push_back(mode);
      }
    }
    first = false;
    prev_mode = mode;
    x_prev = x;
    js = next;

    if (progress.complete()) {
      sum.termination = Termination::Complete;
      break;
    }
  }

  sum.ticks = static_cast<std::int64_t>(result.log.size());
  std::array<std::int64_t, 4> mode_ticks{};
  for (const auto& r : result.log) {
    ++mode_ticks[static_cast<int>(r.mode)];
    sum.max_abs_f_z = std::max(sum.max_abs_f_z, std::abs(r.f_z));
    sum.max_track_err = std::max(sum.max_track_err, r.x_tilde.head<3>().norm());
    if (!std::isnan(r.res_task)) sum.max_res_task = std::max(sum.max_res_task, r.res_task);
    sum.max_res_null = std::max(sum.max_res_null, r.res_null);
    if (r.near_singular) ++sum.near_singular_ticks;
  }
  for (int m = 0; m < 4; ++m) sum.mode_seconds[m] = static_cast<double>(mode_ticks[m]) * dt;
  sum.t_p = progress.t_p();
  sum.end_time = result.log.empty() ? 0.0 : result.log.back().t;
  return result;
}

namespace {

void put(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += ',';
  line += buf;
}

}  // namespace

void write_run_csv(const RunResult& run, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const Eigen::Index n = run.log.empty() ? 0 : run.log.front().u.size();
  std::string header = "t,mode,a_h,a_p,a_f";
  for (int i = 1; i <= 6; ++i) header += ",kd" + std::to_string(i);
  for (int i = 1; i <= 6; ++i) header += ",xt" + std::to_string(i);
  header += ",xd_x,xd_y,xd_z,xd_qw,xd_qx,xd_qy,xd_qz,f_z";
  for (int i = 1; i <= 6; ++i) header += ",fe" + std::to_string(i);
  for (Eigen::Index i = 1; i <= n; ++i) header += ",u" + std::to_string(i);
  header += ",res_task,res_null,qdd_norm,t_p,traj_index,track_err,phi,contact,px,py,pz,near_singular";
  out << header << '\n';
  std::string line;
  for (const auto& r : run.log) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", r.t);
    line = buf;
    line += ',';
    line += to_string(r.mode);
    put(line, r.w.a_h);
    put(line, r.w.a_p);
    put(line, r.w.a_f);
    for (int i = 0; i < 6; ++i) put(line, r.K_d[i]);
    for (int i = 0; i < 6; ++i) put(line, r.x_tilde[i]);
    for (int i = 0; i < 3; ++i) put(line, r.x_d.p[i]);
    put(line, r.x_d.r.w());
    put(line, r.x_d.r.x());
    put(line, r.x_d.r.y());
    put(line, r.x_d.r.z());
    put(line, r.f_z);
    for (int i = 0; i < 6; ++i) put(line, r.f_e[i]);
    for (Eigen::Index i = 0; i < r.u.size(); ++i) put(line, r.u[i]);
    put(line, r.res_task);
    put(line, r.res_null);
    put(line, r.qdd_norm);
    put(line, r.t_p);
    line += ',' + std::to_string(r.traj_index);
    put(line, r.track_err);
    put(line, r.phi);
    line += r.contact ? ",1" : ",0";
    for (int i = 0; i < 3; ++i) put(line, r.p[i]);
    line += r.near_singular ? ",1" : ",0";
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_summary_json(const RunResult& run, const Scenario& sc,
                        const std::filesystem::path& path) {
  const RunSummary& s = run.summary;
  nlohmann::ordered_json j;
  j["scenario"] = sc.name;
  j["seed"] = sc.seed;
  j["dt_s"] = sc.dt;
  j["termination"] = std::string(to_string(s.termination));
  j["emergency_stop"] = s.termination == Termination::EmergencyStop;
  j["diagnostic"] = s.diagnostic;
  j["ticks"] = s.ticks;
  j["end_time_s"] = s.end_time;
  j["t_p_s"] = s.t_p;
  nlohmann::ordered_json modes;
  for (Mode m : kAllModes) modes[std::string(to_string(m))] = s.mode_seconds[static_cast<int>(m)];
  j["mode_seconds"] = modes;
  auto visits = nlohmann::json::array();
  for (Mode m : s.visit_order) visits.push_back(std::string(to_string(m)));
  j["visit_order"] = visits;
  auto trans = nlohmann::json::array();
  for (const auto& tr : s.transitions) {
    trans.push_back({{"t_s", tr.t},
                     {"from", std::string(to_string(tr.from))},
                     {"to", std::string(to_string(tr.to))}});
  }
  j["transitions"] = trans;
  j["max_abs_f_z_N"] = s.max_abs_f_z;
  j["max_track_err_m"] = s.max_track_err;
  j["max_res_task"] = s.max_res_task;
  j["max_res_null"] = s.max_res_null;
  j["torque_clamps"] = s.torque_clamps;
  j["joint_clamps"] = s.joint_clamps;
  j["near_singular_ticks"] = s.near_singular_ticks;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace mmic
