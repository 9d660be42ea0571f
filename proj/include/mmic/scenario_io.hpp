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
#include <string>

#include <json.hpp>

#include "mmic/robot_model_io.hpp"
#include "mmic/sim.hpp"

namespace mmic {

/// Parses a scenario document (docs/formats.md). Absent sections keep
/// their defaults; unknown keys are rejected. `dof` sizes the null-space
/// gains.
Scenario scenario_from_json(const nlohmann::json& doc, int dof);
Scenario load_scenario(const std::filesystem::path& path, int dof);

/// Validates robot and scenario together and renders the parameter table.
/// Throws ContractViolation or ConfigError on the first violation.
std::string check_report(const RobotModel& model, const Scenario& scenario);

}  // namespace mmic
