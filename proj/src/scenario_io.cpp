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

#include "mmic/scenario_io.hpp"

#include <cstdio>
#include <initializer_list>
#include <sstream>

namespace mmic {

namespace {

using nlohmann::json;

void allow_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

double num(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

VecX vec(const json& v, const std::string& where, Eigen::Index expected) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected) {
    throw ConfigError(where + ": expected " + std::to_string(expected) + " entries");
  }
  VecX out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where + ": expected numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

Vec3 vec3(const json& v, const std::string& where) { return vec(v, where, 3); }

// A scalar broadcast to every entry, or an explicit array.
VecX scalar_or_vec(const json& v, const std::string& where, Eigen::Index n) {
  if (v.is_number()) return VecX::Constant(n, v.get<double>());
  return vec(v, where, n);
}

std::optional<Vec3> opt_vec3(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return vec3(obj.at(key), where + "." + key);
}

ScenarioEvent parse_event(const json& e, const std::string& where) {
  allow_keys(e, where,
             {"kind", "t_start", "t_end", "magnitude", "direction", "offset", "force",
              "approach_s", "release_s", "move_s"});
  if (!e.contains("kind") || !e["kind"].is_string()) throw ConfigError(where + ": missing 'kind'");
  const auto kind = event_kind_from_string(e["kind"].get<std::string>());
  if (!kind) throw ConfigError(where + ": unknown event kind '" + e["kind"].get<std::string>() + "'");
  if (!e.contains("t_start") || !e.contains("t_end")) {
    throw ConfigError(where + ": t_start and t_end are required");
  }
  ScenarioEvent ev;
  ev.kind = *kind;
  ev.t_start = num(e, "t_start", 0.0, where);
  ev.t_end = num(e, "t_end", 0.0, where);
  double fallback = 0.0;
  if (ev.kind == EventKind::PatientPush) fallback = 15.0;
  if (ev.kind == EventKind::PatientDodge) fallback = 0.02;
  ev.magnitude = num(e, "magnitude", fallback, where);
  ev.direction = opt_vec3(e, "direction", where);
  ev.offset = opt_vec3(e, "offset", where);
  ev.force = opt_vec3(e, "force", where);
  ev.approach_s = num(e, "approach_s", ev.approach_s, where);
  ev.release_s = num(e, "release_s", ev.release_s, where);
  ev.move_s = num(e, "move_s", ev.move_s, where);
  if (ev.direction && ev.direction->norm() < 1e-12) throw ConfigError(where + ".direction: zero vector");
  if (!(ev.approach_s > 0.0) || !(ev.release_s > 0.0) || !(ev.move_s > 0.0)) {
    throw ConfigError(where + ": approach_s, release_s and move_s must be positive");
  }
  return ev;
}

}  // namespace

Scenario scenario_from_json(const json& doc, int dof) {
  allow_keys(doc, "scenario",
             {"name", "duration_s", "dt_s", "seed", "events", "patient", "task", "gains",
              "thresholds", "weighting", "contact", "perception", "hand", "start", "safety"});
  Scenario sc;
  sc.gains = ImpedanceParams::defaults(dof);
  sc.name = doc.value("name", std::string("scenario"));
  sc.duration = num(doc, "duration_s", sc.duration, "scenario");
  sc.dt = num(doc, "dt_s", sc.dt, "scenario");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("scenario.seed: expected a non-negative integer");
    sc.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("task")) {
    const json& t = doc["task"];
    allow_keys(t, "task", {"T_s", "N_pts", "T_rec_s", "skin_offset_m"});
    sc.task.T = num(t, "T_s", sc.task.T, "task");
    sc.task.T_rec = num(t, "T_rec_s", sc.task.T_rec, "task");
    sc.task.skin_offset = num(t, "skin_offset_m", sc.task.skin_offset, "task");
    if (t.contains("N_pts")) {
      if (!t["N_pts"].is_number_integer()) throw ConfigError("task.N_pts: expected an integer");
      sc.task.N_pts = t["N_pts"].get<int>();
    }
  }

  if (doc.contains("patient")) {
    const json& p = doc["patient"];
    allow_keys(p, "patient",
               {"cylinder_radius_m", "cylinder_length_m", "axis_start_m", "head_offset_m",
                "base_pose"});
    sc.patient.cylinder_radius = num(p, "cylinder_radius_m", sc.patient.cylinder_radius, "patient");
    sc.patient.cylinder_length = num(p, "cylinder_length_m", sc.patient.cylinder_length, "patient");
    sc.patient.axis_start = num(p, "axis_start_m", sc.patient.axis_start, "patient");
    sc.patient.head_offset = num(p, "head_offset_m", sc.patient.head_offset, "patient");
    if (p.contains("base_pose")) {
      const json& bp = p["base_pose"];
      allow_keys(bp, "patient.base_pose", {"position", "quaternion"});
      Vec3 pos = sc.patient.base_pose.p;
      Quat q = sc.patient.base_pose.r;
      if (bp.contains("position")) pos = vec3(bp["position"], "patient.base_pose.position");
      if (bp.contains("quaternion")) {
        const VecX wxyz = vec(bp["quaternion"], "patient.base_pose.quaternion", 4);
        if (wxyz.norm() < 1e-9) throw ConfigError("patient.base_pose.quaternion: zero norm");
        q = Quat(wxyz[0], wxyz[1], wxyz[2], wxyz[3]).normalized();
      }
      sc.patient.base_pose = Pose(pos, q);
    }
  }

  if (doc.contains("gains")) {
    const json& g = doc["gains"];
    allow_keys(g, "gains", {"M_d", "K_g", "K_gn", "C_d", "K_vn"});
    Vec6 M_d = sc.gains.M_d, K_g = sc.gains.K_g;
    VecX K_gn = sc.gains.K_gn;
    if (g.contains("M_d")) M_d = vec(g["M_d"], "gains.M_d", 6);
    if (g.contains("K_g")) K_g = vec(g["K_g"], "gains.K_g", 6);
    if (g.contains("K_gn")) K_gn = scalar_or_vec(g["K_gn"], "gains.K_gn", dof);
    if ((M_d.array() <= 0.0).any()) throw ContractViolation("gains: M_d must be positive");
    if ((K_g.array() < 0.0).any()) throw ContractViolation("gains: K_g must be positive semi-definite");
    if ((K_gn.array() < 0.0).any()) throw ContractViolation("gains: K_gn must be positive semi-definite");
    sc.gains = ImpedanceParams::critically_damped(M_d, K_g, K_gn);
    if (g.contains("C_d")) sc.gains.C_d = vec(g["C_d"], "gains.C_d", 6);
    if (g.contains("K_vn")) sc.gains.K_vn = scalar_or_vec(g["K_vn"], "gains.K_vn", dof);
  }

  if (doc.contains("thresholds")) {
    const json& t = doc["thresholds"];
    allow_keys(t, "thresholds", {"a_ht", "a_ft", "a_pt", "eps_m", "condition"});
    sc.thresholds.a_ht = num(t, "a_ht", sc.thresholds.a_ht, "thresholds");
    sc.thresholds.a_ft = num(t, "a_ft", sc.thresholds.a_ft, "thresholds");
    sc.thresholds.a_pt = num(t, "a_pt", sc.thresholds.a_pt, "thresholds");
    sc.thresholds.eps = num(t, "eps_m", sc.thresholds.eps, "thresholds");
    if (t.contains("condition")) {
      const std::string c = t["condition"].is_string() ? t["condition"].get<std::string>() : "";
      if (c == "position_and_proximity_or_force") {
        sc.thresholds.condition = ScanCondition::PositionAndProximityOrForce;
      } else if (c == "position_and_either") {
        sc.thresholds.condition = ScanCondition::PositionAndEither;
      } else {
        throw ConfigError("thresholds.condition: expected 'position_and_proximity_or_force' or "
                          "'position_and_either'");
      }
    }
  }

  if (doc.contains("weighting")) {
    const json& w = doc["weighting"];
    allow_keys(w, "weighting", {"r_h_m", "r_p_m", "x_top_m", "x_bottom_m", "f0_N"});
    sc.weighting.r_h = num(w, "r_h_m", sc.weighting.r_h, "weighting");
    sc.weighting.r_p = num(w, "r_p_m", sc.weighting.r_p, "weighting");
    sc.weighting.x_top = num(w, "x_top_m", sc.weighting.x_top, "weighting");
    sc.weighting.x_bottom = num(w, "x_bottom_m", sc.weighting.x_bottom, "weighting");
    sc.weighting.f0 = num(w, "f0_N", sc.weighting.f0, "weighting");
  }
  sc.perception.r_cyl = sc.weighting.r_p;

  if (doc.contains("contact")) {
    const json& c = doc["contact"];
    allow_keys(c, "contact", {"k_env", "d_env"});
    sc.contact.k_env = num(c, "k_env", sc.contact.k_env, "contact");
    sc.contact.d_env = num(c, "d_env", sc.contact.d_env, "contact");
  }

  if (doc.contains("perception")) {
    const json& p = doc["perception"];
    allow_keys(p, "perception",
               {"cloud_points", "noise_sd_m", "mls_support_m", "r_cyl_m", "slab_half_m",
                "path_x_min_m", "path_x_max_m", "bin_width_m", "surface_radius_m"});
    auto& pc = sc.perception;
    if (p.contains("cloud_points")) {
      if (!p["cloud_points"].is_number_unsigned()) throw ConfigError("perception.cloud_points: expected a positive integer");
      pc.cloud_points = p["cloud_points"].get<std::size_t>();
    }
    pc.noise_sd = num(p, "noise_sd_m", pc.noise_sd, "perception");
    pc.mls_support = num(p, "mls_support_m", pc.mls_support, "perception");
    pc.r_cyl = num(p, "r_cyl_m", pc.r_cyl, "perception");
    pc.trajectory.slab_half = num(p, "slab_half_m", pc.trajectory.slab_half, "perception");
    pc.trajectory.x_min = num(p, "path_x_min_m", pc.trajectory.x_min, "perception");
    pc.trajectory.x_max = num(p, "path_x_max_m", pc.trajectory.x_max, "perception");
    pc.trajectory.bin_width = num(p, "bin_width_m", pc.trajectory.bin_width, "perception");
    pc.trajectory.surface_radius = num(p, "surface_radius_m", pc.trajectory.surface_radius, "perception");
  }

  if (doc.contains("hand")) {
    const json& h = doc["hand"];
    allow_keys(h, "hand", {"standby", "kp", "kd", "max_force_N"});
    if (h.contains("standby")) sc.hand.standby = vec3(h["standby"], "hand.standby");
    sc.hand.kp = num(h, "kp", sc.hand.kp, "hand");
    sc.hand.kd = num(h, "kd", sc.hand.kd, "hand");
    sc.hand.max_force = num(h, "max_force_N", sc.hand.max_force, "hand");
  }

  if (doc.contains("start")) {
    const json& s = doc["start"];
    allow_keys(s, "start", {"pose", "offset_m", "q0"});
    if (s.contains("pose")) {
      const std::string p = s["pose"].is_string() ? s["pose"].get<std::string>() : "";
      if (p == "home") sc.start.pose = StartPose::Home;
      else if (p == "trajectory_start") sc.start.pose = StartPose::TrajectoryStart;
      else if (p == "explicit") sc.start.pose = StartPose::Explicit;
      else throw ConfigError("start.pose: expected 'home', 'trajectory_start' or 'explicit'");
    }
    sc.start.offset = num(s, "offset_m", sc.start.offset, "start");
    if (s.contains("q0")) {
      sc.start.q0 = vec(s["q0"], "start.q0", dof);
      if (!s.contains("pose")) sc.start.pose = StartPose::Explicit;
    }
  }

  if (doc.contains("safety")) {
    const json& s = doc["safety"];
    allow_keys(s, "safety", {"f_max"});
    if (s.contains("f_max")) sc.f_max = Vec6(scalar_or_vec(s["f_max"], "safety.f_max", 6));
  }

  if (doc.contains("events")) {
    const json& ev = doc["events"];
    if (!ev.is_array()) throw ConfigError("events: expected an array");
    for (std::size_t i = 0; i < ev.size(); ++i) {
      sc.events.push_back(parse_event(ev[i], "events[" + std::to_string(i) + "]"));
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path, int dof) {
  return scenario_from_json(read_json_file(path), dof);
}

std::string check_report(const RobotModel& model, const Scenario& sc) {
  model.validate();
  sc.validate(model.dof());
  std::ostringstream out;
  auto row = [&out](const char* a, double va, const char* ua, const char* b, double vb,
                    const char* ub, const char* c, double vc, const char* uc) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %8g %-3s | %-10s %8g %-3s | %-10s %8g %-3s\n", a, va, ua,
                  b, vb, ub, c, vc, uc);
    out << buf;
  };
  out << "robot: " << model.name << " (" << model.dof() << " joints)\n";
  out << "scenario: " << sc.name << "\n\n";
  row("r_h", sc.weighting.r_h, "m", "r_p", sc.weighting.r_p, "m", "a_ht", sc.thresholds.a_ht, "");
  row("x_top", sc.weighting.x_top, "m", "f0", sc.weighting.f0, "N", "a_ft", sc.thresholds.a_ft, "");
  row("x_bottom", sc.weighting.x_bottom, "m", "T", sc.task.T, "s", "a_pt", sc.thresholds.a_pt, "");
  row("eps", sc.thresholds.eps, "m", "T_rec", sc.task.T_rec, "s", "N", sc.task.N_pts, "");
  out << "\nM_d  " << sc.gains.M_d.transpose() << "\n";
  out << "K_g  " << sc.gains.K_g.transpose() << "\n";
  out << "C_d  " << sc.gains.C_d.transpose() << "\n";
  out << "K_gn " << sc.gains.K_gn.transpose() << "\n";
  out << "K_vn " << sc.gains.K_vn.transpose() << "\n";
  out << "f_max " << sc.f_max.value_or(model.f_max).transpose() << "\n";
  out << "dt " << sc.dt << " s, duration " << sc.duration << " s, seed " << sc.seed << ", "
      << sc.events.size() << " events\n";
  return out.str();
}

}  // namespace mmic
