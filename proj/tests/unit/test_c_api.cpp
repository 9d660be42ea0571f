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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mmic/mmic.h"

namespace fs = std::filesystem;

namespace {

std::string source(const std::string& rel) { return (fs::path(MMIC_SOURCE_DIR) / rel).string(); }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mmic_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

struct Robot {
  mmic_robot* h = nullptr;
  Robot() { REQUIRE(mmic_robot_load(nullptr, &h) == MMIC_OK); }
  ~Robot() { mmic_robot_free(h); }
};

}  // namespace

TEST_CASE("version and empty error") {
  CHECK(std::string(mmic_version()).size() > 0);
  mmic_robot* r = nullptr;
  REQUIRE(mmic_robot_load(nullptr, &r) == MMIC_OK);
  CHECK(std::string(mmic_last_error()).empty());
  CHECK(mmic_robot_dof(r) == 7);
  mmic_robot_free(r);
}

TEST_CASE("robot loading from file and failures") {
  mmic_robot* r = nullptr;
  CHECK(mmic_robot_load(source("models/reference_arm.json").c_str(), &r) == MMIC_OK);
  CHECK(mmic_robot_dof(r) == 7);
  mmic_robot_free(r);

  r = reinterpret_cast<mmic_robot*>(0x1);
  CHECK(mmic_robot_load("/nonexistent/arm.json", &r) == MMIC_ERR_CONFIG);
  CHECK(r == nullptr);
  CHECK(std::string(mmic_last_error()).find("/nonexistent/arm.json") != std::string::npos);

  CHECK(mmic_robot_load(nullptr, nullptr) == MMIC_ERR_INVALID_ARGUMENT);
  CHECK(mmic_robot_dof(nullptr) == 0);
  mmic_robot_free(nullptr);
}

TEST_CASE("kinematics through the C interface") {
  Robot r;
  const double q[7] = {0.1, -0.5, 0.2, -2.0, 0.3, 1.6, 0.4};
  double pose[7];
  REQUIRE(mmic_forward_kinematics(r.h, q, pose) == MMIC_OK);
  const double qn = std::sqrt(pose[3] * pose[3] + pose[4] * pose[4] + pose[5] * pose[5] +
                              pose[6] * pose[6]);
  CHECK(qn == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pose[3] >= 0.0);

  // Linear rows of the Jacobian against position differences.
  std::vector<double> J(6 * 7);
  REQUIRE(mmic_jacobian(r.h, q, J.data()) == MMIC_OK);
  const double h = 1e-6;
  for (int c = 0; c < 7; ++c) {
    double qp[7], qm[7], pp[7], pm[7];
    std::copy(q, q + 7, qp);
    std::copy(q, q + 7, qm);
    qp[c] += h;
    qm[c] -= h;
    mmic_forward_kinematics(r.h, qp, pp);
    mmic_forward_kinematics(r.h, qm, pm);
    for (int k = 0; k < 3; ++k) {
      CHECK(J[k * 7 + c] == doctest::Approx((pp[k] - pm[k]) / (2 * h)).epsilon(1e-6).scale(1.0));
    }
  }
  CHECK(mmic_forward_kinematics(r.h, nullptr, pose) == MMIC_ERR_INVALID_ARGUMENT);
  CHECK(mmic_jacobian(nullptr, q, J.data()) == MMIC_ERR_INVALID_ARGUMENT);
  const double bad[7] = {NAN, 0, 0, -1, 0, 1, 0};
  CHECK(mmic_forward_kinematics(r.h, bad, pose) != MMIC_OK);
}

TEST_CASE("scenario handles and setters") {
  Robot r;
  mmic_scenario* s = nullptr;
  REQUIRE(mmic_scenario_load(source("scenarios/human_guided.json").c_str(), r.h, &s) == MMIC_OK);
  CHECK(mmic_scenario_set_dt(s, 0.0) == MMIC_ERR_INVALID_ARGUMENT);
  CHECK(mmic_scenario_set_duration(s, -1.0) == MMIC_ERR_INVALID_ARGUMENT);
  CHECK(mmic_scenario_set_f_max(s, 0.0) == MMIC_ERR_INVALID_ARGUMENT);
  CHECK(mmic_scenario_set_seed(s, 9) == MMIC_OK);
  CHECK(mmic_scenario_set_duration(s, 0.2) == MMIC_OK);
  CHECK(mmic_scenario_set_dt(nullptr, 0.001) == MMIC_ERR_INVALID_ARGUMENT);
  mmic_scenario_free(s);
  mmic_scenario_free(nullptr);

  s = reinterpret_cast<mmic_scenario*>(0x1);
  CHECK(mmic_scenario_load("/nonexistent.json", r.h, &s) == MMIC_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(mmic_scenario_load(nullptr, r.h, &s) == MMIC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("check copies the parameter table") {
  Robot r;
  mmic_scenario* s = nullptr;
  REQUIRE(mmic_scenario_load(source("scenarios/scanning_only.json").c_str(), r.h, &s) == MMIC_OK);
  size_t needed = 0;
  REQUIRE(mmic_check(r.h, s, nullptr, 0, &needed) == MMIC_OK);
  CHECK(needed > 10);
  std::vector<char> full(needed);
  REQUIRE(mmic_check(r.h, s, full.data(), full.size(), nullptr) == MMIC_OK);
  CHECK(std::string(full.data()).size() == needed - 1);
  char small[8];
  REQUIRE(mmic_check(r.h, s, small, sizeof small, &needed) == MMIC_OK);
  CHECK(std::string(small) == std::string(full.data(), 7));
  mmic_scenario_free(s);

  const fs::path dir = scratch("check");
  const std::string bad = write_file(dir / "bad.json", R"({"thresholds": {"a_ht": 1.5}})");
  REQUIRE(mmic_scenario_load(bad.c_str(), r.h, &s) == MMIC_OK);
  CHECK(mmic_check(r.h, s, nullptr, 0, &needed) == MMIC_ERR_CONFIG);
  CHECK(std::string(mmic_last_error()) == "threshold out of (0,1)");
  mmic_scenario_free(s);

  const std::string unknown = write_file(dir / "unknown.json", R"({"speed": 3})");
  CHECK(mmic_scenario_load(unknown.c_str(), r.h, &s) == MMIC_ERR_CONFIG);
}

TEST_CASE("run, write outputs and plot") {
  Robot r;
  mmic_scenario* s = nullptr;
  REQUIRE(mmic_scenario_load(source("scenarios/human_guided.json").c_str(), r.h, &s) == MMIC_OK);
  REQUIRE(mmic_scenario_set_duration(s, 0.3) == MMIC_OK);
  mmic_run* run = nullptr;
  REQUIRE(mmic_run_scenario(r.h, s, &run) == MMIC_OK);
  CHECK(mmic_run_termination(run) == MMIC_TERM_DURATION);
  CHECK(mmic_run_ticks(run) == 300);
  CHECK(std::string(mmic_run_diagnostic(run)).empty());
  double total = 0.0;
  for (int m = 0; m < 4; ++m) total += mmic_run_mode_seconds(run, static_cast<mmic_mode>(m));
  CHECK(total == doctest::Approx(0.3));
  CHECK(mmic_run_mode_seconds(run, MMIC_MODE_HUMAN_GUIDED) > 0.0);
  CHECK(mmic_run_mode_seconds(run, static_cast<mmic_mode>(7)) == 0.0);
  CHECK(mmic_run_progress(run) == 0.0);

  const fs::path dir = scratch("run");
  CHECK(mmic_run_write_csv(run, (dir / "run.csv").string().c_str()) == MMIC_OK);
  CHECK(mmic_run_write_summary(run, (dir / "summary.json").string().c_str()) == MMIC_OK);
  CHECK(fs::file_size(dir / "run.csv") > 1000);
  CHECK(mmic_run_write_csv(run, "/nonexistent/dir/run.csv") == MMIC_ERR_IO);
  int panels = 0;
  CHECK(mmic_plot((dir / "run.csv").string().c_str(), (dir / "svg").string().c_str(), &panels) ==
        MMIC_OK);
  CHECK(panels == 7);
  const std::string empty = write_file(dir / "empty.csv", "");
  CHECK(mmic_plot(empty.c_str(), (dir / "svg2").string().c_str(), &panels) == MMIC_ERR_IO);
  mmic_run_free(run);
  mmic_run_free(nullptr);
  mmic_scenario_free(s);
}

TEST_CASE("emergency stop is reported as a normal outcome") {
  Robot r;
  mmic_scenario* s = nullptr;
  REQUIRE(mmic_scenario_load(source("scenarios/estop.json").c_str(), r.h, &s) == MMIC_OK);
  mmic_run* run = nullptr;
  REQUIRE(mmic_run_scenario(r.h, s, &run) == MMIC_OK);
  CHECK(mmic_run_termination(run) == MMIC_TERM_EMERGENCY_STOP);
  CHECK(std::string(mmic_run_diagnostic(run)).find("emergency stop") != std::string::npos);
  CHECK(mmic_run_ticks(run) < 1000);
  mmic_run_free(run);
  mmic_scenario_free(s);
}
