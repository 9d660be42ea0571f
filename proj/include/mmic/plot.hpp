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
#include <string>
#include <vector>

namespace mmic {

class PlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Panel file names in drawing order.
extern const std::vector<std::string> kPlotPanels;

/// Reads a run CSV and writes one SVG per panel into out_dir (created if
/// missing). Returns the written paths. Throws PlotError on a missing,
/// empty or malformed CSV.
std::vector<std::filesystem::path> plot_run(const std::filesystem::path& run_csv,
                                            const std::filesystem::path& out_dir);

}  // namespace mmic
