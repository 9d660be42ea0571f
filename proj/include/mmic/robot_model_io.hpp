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
#include <stdexcept>

#include <json.hpp>

#include "mmic/robot_core.hpp"

namespace mmic {

/// Malformed or unreadable configuration document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Robot documents: see docs/formats.md. Parsing checks structure only;
// call RobotModel::validate() for the physical invariants.
RobotModel robot_model_from_json(const nlohmann::json& doc);
nlohmann::json robot_model_to_json(const RobotModel& model);
RobotModel load_robot_model(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace mmic
