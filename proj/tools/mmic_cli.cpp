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

// mmic: run, check and plot scanning scenarios.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 emergency stop.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mmic/mmic.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitEmergencyStop = 2;

struct RunOptions {
  std::string robot;
  std::string scenario;
  std::string out;
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
};

int report(const char* what) {
  std::fprintf(stderr, "mmic: %s: %s\n", what, mmic_last_error());
  return kExitConfig;
}

// Owns the handles for one invocation.
struct Session {
  mmic_robot* robot = nullptr;
  mmic_scenario* scenario = nullptr;
  mmic_run* run = nullptr;
  ~Session() {
    mmic_run_free(run);
    mmic_scenario_free(scenario);
    mmic_robot_free(robot);
  }
};

int load(const RunOptions& o, Session& s) {
  if (mmic_robot_load(o.robot.empty() ? nullptr : o.robot.c_str(), &s.robot) != MMIC_OK) {
    return report("robot");
  }
  if (mmic_scenario_load(o.scenario.c_str(), s.robot, &s.scenario) != MMIC_OK) {
    return report("scenario");
  }
  if (o.dt && mmic_scenario_set_dt(s.scenario, *o.dt) != MMIC_OK) return report("--dt");
  if (o.duration && mmic_scenario_set_duration(s.scenario, *o.duration) != MMIC_OK) {
    return report("--duration");
  }
  if (o.seed && mmic_scenario_set_seed(s.scenario, *o.seed) != MMIC_OK) return report("--seed");
  return kExitOk;
}

int cmd_check(const RunOptions& o) {
  Session s;
  if (int rc = load(o, s)) return rc;
  std::size_t needed = 0;
  if (mmic_check(s.robot, s.scenario, nullptr, 0, &needed) != MMIC_OK) return report("check");
  std::vector<char> buf(needed);
  mmic_check(s.robot, s.scenario, buf.data(), buf.size(), &needed);
  std::fputs(buf.data(), stdout);
  std::puts("check: ok");
  return kExitOk;
}

int cmd_run(const RunOptions& o) {
  Session s;
  if (int rc = load(o, s)) return rc;
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) {
    std::fprintf(stderr, "mmic: cannot create %s: %s\n", o.out.c_str(), ec.message().c_str());
    return kExitConfig;
  }
  if (mmic_run_scenario(s.robot, s.scenario, &s.run) != MMIC_OK) return report("run");
  const std::string csv = (std::filesystem::path(o.out) / "run.csv").string();
  const std::string summary = (std::filesystem::path(o.out) / "summary.json").string();
  if (mmic_run_write_csv(s.run, csv.c_str()) != MMIC_OK) return report("run.csv");
  if (mmic_run_write_summary(s.run, summary.c_str()) != MMIC_OK) return report("summary.json");

  const char* names[] = {"waiting", "scanning", "recovery", "human_guided"};
  std::printf("ticks %lld, progress %.3f s\n", static_cast<long long>(mmic_run_ticks(s.run)),
              mmic_run_progress(s.run));
  for (int m = 0; m < 4; ++m) {
    std::printf("  %-13s %8.3f s\n", names[m],
                mmic_run_mode_seconds(s.run, static_cast<mmic_mode>(m)));
  }
  std::printf("wrote %s and %s\n", csv.c_str(), summary.c_str());
  if (mmic_run_termination(s.run) == MMIC_TERM_EMERGENCY_STOP) {
    std::fprintf(stderr, "mmic: %s\n", mmic_run_diagnostic(s.run));
    return kExitEmergencyStop;
  }
  return kExitOk;
}

int cmd_plot(const std::string& csv, const std::string& out) {
  int panels = 0;
  if (mmic_plot(csv.c_str(), out.c_str(), &panels) != MMIC_OK) return report("plot");
  std::printf("wrote %d panels to %s\n", panels, out.c_str());
  return kExitOk;
}

void add_common(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--robot", o.robot, "robot model JSON (default: built-in reference arm)");
  cmd->add_option("--scenario", o.scenario, "scenario JSON")->required();
  cmd->add_option("--dt", o.dt, "override the time step, s");
  cmd->add_option("--duration", o.duration, "override the simulated time cap, s");
  cmd->add_option("--seed", o.seed, "override the random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-modal interaction control simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mmic_version()));

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "simulate a scenario, write run.csv and summary.json");
  add_common(run, run_opts);
  run->add_option("--out", run_opts.out, "output directory")->required();

  RunOptions check_opts;
  auto* check = app.add_subcommand("check", "validate robot and scenario, print parameters");
  add_common(check, check_opts);
  check->add_option("--out", check_opts.out, "ignored; accepted for symmetry with run");

  std::string plot_csv, plot_out;
  auto* plot = app.add_subcommand("plot", "render the seven SVG panels of a run");
  plot->add_option("csv", plot_csv, "run.csv")->required();
  plot->add_option("--out", plot_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  if (*run) return cmd_run(run_opts);
  if (*check) return cmd_check(check_opts);
  return cmd_plot(plot_csv, plot_out);
}
