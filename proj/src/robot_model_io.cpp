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

#include "mmic/robot_model_io.hpp"

#include <fstream>

namespace mmic {

namespace {

using nlohmann::json;

const json& require_key(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(where + ": missing key '" + key + "'");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

VecX vector_of(const json& v, const std::string& where, Eigen::Index expected = -1) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected) {
    throw ConfigError(where + ": expected " + std::to_string(expected) + " entries");
  }
  VecX out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = number(v[i], where);
  }
  return out;
}

std::vector<double> to_std(const VecX& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RobotModel robot_model_from_json(const json& doc) {
  RobotModel m;
  if (!doc.is_object()) throw ConfigError("robot: document must be an object");
  m.name = doc.value("name", std::string("arm"));

  const json& links = require_key(doc, "links", "robot");
  if (!links.is_array() || links.empty()) throw ConfigError("robot.links: expected a non-empty array");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string where = "robot.links[" + std::to_string(i) + "]";
    const json& l = links[i];
    LinkParams p;
    p.a = number(require_key(l, "a", where), where + ".a");
    p.alpha = number(require_key(l, "alpha", where), where + ".alpha");
    p.d = number(require_key(l, "d", where), where + ".d");
    p.theta_offset = l.contains("theta_offset") ? number(l["theta_offset"], where) : 0.0;
    p.mass = number(require_key(l, "mass", where), where + ".mass");
    p.com = vector_of(require_key(l, "com", where), where + ".com", 3);
    // [ixx, iyy, izz, ixy, ixz, iyz]
    const VecX I = vector_of(require_key(l, "inertia", where), where + ".inertia", 6);
    p.inertia << I[0], I[3], I[4], I[3], I[1], I[5], I[4], I[5], I[2];
    m.links.push_back(p);
  }

  const json& lim = require_key(doc, "joint_limits", "robot");
  if (!lim.is_array()) throw ConfigError("robot.joint_limits: expected an array");
  for (std::size_t i = 0; i < lim.size(); ++i) {
    const VecX pair = vector_of(lim[i], "robot.joint_limits[" + std::to_string(i) + "]", 2);
    m.joint_limits.push_back({pair[0], pair[1]});
  }
  m.torque_limits = vector_of(require_key(doc, "torque_limits", "robot"), "robot.torque_limits");

  const json& fmax = require_key(doc, "f_max", "robot");
  if (fmax.is_number()) {
    m.f_max = Vec6::Constant(fmax.get<double>());
  } else {
    m.f_max = vector_of(fmax, "robot.f_max", 6);
  }

  if (doc.contains("tool")) {
    const json& tool = doc["tool"];
    m.tool_length = tool.contains("length") ? number(tool["length"], "robot.tool.length") : 0.0;
    m.tool_yaw = tool.contains("yaw") ? number(tool["yaw"], "robot.tool.yaw") : 0.0;
  }
  if (doc.contains("gravity")) m.gravity = vector_of(doc["gravity"], "robot.gravity", 3);
  if (doc.contains("home")) m.home = vector_of(doc["home"], "robot.home");
  return m;
}

json robot_model_to_json(const RobotModel& m) {
  json doc;
  doc["name"] = m.name;
  json links = json::array();
  for (const auto& l : m.links) {
    links.push_back({{"a", l.a},
                     {"alpha", l.alpha},
                     {"d", l.d},
                     {"theta_offset", l.theta_offset},
                     {"mass", l.mass},
                     {"com", {l.com.x(), l.com.y(), l.com.z()}},
                     {"inertia",
                      {l.inertia(0, 0), l.inertia(1, 1), l.inertia(2, 2), l.inertia(0, 1),
                       l.inertia(0, 2), l.inertia(1, 2)}}});
  }
  doc["links"] = links;
  json lim = json::array();
  for (const auto& jl : m.joint_limits) lim.push_back({jl.lower, jl.upper});
  doc["joint_limits"] = lim;
  doc["torque_limits"] = to_std(m.torque_limits);
  doc["f_max"] = to_std(m.f_max);
  doc["tool"] = {{"length", m.tool_length}, {"yaw", m.tool_yaw}};
  doc["gravity"] = {m.gravity.x(), m.gravity.y(), m.gravity.z()};
  if (m.home.size() > 0) doc["home"] = to_std(m.home);
  return doc;
}

RobotModel load_robot_model(const std::filesystem::path& path) {
  return robot_model_from_json(read_json_file(path));
}

}  // namespace mmic
