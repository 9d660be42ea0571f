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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string source(const std::string& rel) { return (fs::path(MMIC_SOURCE_DIR) / rel).string(); }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mmic_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the CLI with stdout and stderr captured into log; returns the exit code.
int mmic(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string("\"") + MMIC_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("usage errors exit with 1") {
  const fs::path dir = scratch("usage");
  CHECK(mmic("", dir / "log") == 1);
  CHECK(mmic("run --out " + dir.string(), dir / "log") == 1);
  CHECK(mmic("frobnicate", dir / "log") == 1);
  CHECK(mmic("--help", dir / "log") == 0);
}

TEST_CASE("missing scenario file exits with 1") {
  const fs::path dir = scratch("missing");
  CHECK(mmic("run --scenario /nonexistent.json --out " + dir.string(), dir / "log") == 1);
  CHECK(slurp(dir / "log").find("/nonexistent.json") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "run.csv"));
}

TEST_CASE("check rejects invalid configuration") {
  const fs::path dir = scratch("check");
  write_file(dir / "a_ht.json", R"({"thresholds": {"a_ht": 1.5}})");
  CHECK(mmic("check --scenario " + (dir / "a_ht.json").string(), dir / "log") == 1);
  CHECK(slurp(dir / "log").find("threshold out of (0,1)") != std::string::npos);
  write_file(dir / "x.json", R"({"weighting": {"x_top_m": 0.01, "x_bottom_m": 0.1}})");
  CHECK(mmic("check --scenario " + (dir / "x.json").string(), dir / "log") == 1);
  CHECK(mmic("check --scenario " + source("scenarios/full_experiment.json"), dir / "log") == 0);
  CHECK(slurp(dir / "log").find("check: ok") != std::string::npos);
  CHECK(mmic("check --robot /nonexistent/arm.json --scenario " +
                 source("scenarios/full_experiment.json"),
             dir / "log") == 1);
}

TEST_CASE("emergency stop exits with 2") {
  const fs::path dir = scratch("estop");
  CHECK(mmic("run --scenario " + source("scenarios/estop.json") + " --out " + dir.string(),
             dir / "log") == 2);
  CHECK(slurp(dir / "log").find("emergency stop") != std::string::npos);
  CHECK(fs::exists(dir / "run.csv"));
  CHECK(slurp(dir / "summary.json").find("\"emergency_stop\": true") != std::string::npos);
}

TEST_CASE("plot exit codes") {
  const fs::path dir = scratch("plot");
  write_file(dir / "empty.csv", "");
  CHECK(mmic("plot " + (dir / "empty.csv").string() + " --out " + (dir / "a").string(),
             dir / "log") == 1);

  CHECK(mmic("run --scenario " + source("scenarios/human_guided.json") +
                 " --duration 0.001 --out " + dir.string(),
             dir / "log") == 0);
  std::ifstream in(dir / "run.csv");
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 1);
  CHECK(mmic("plot " + (dir / "run.csv").string() + " --out " + (dir / "svg").string(),
             dir / "log") == 0);
  int svgs = 0;
  for (const auto& e : fs::directory_iterator(dir / "svg")) svgs += e.path().extension() == ".svg";
  CHECK(svgs == 7);
}

TEST_CASE("overrides are validated") {
  const fs::path dir = scratch("overrides");
  CHECK(mmic("run --scenario " + source("scenarios/human_guided.json") + " --dt -1 --out " +
                 dir.string(),
             dir / "log") == 1);
  CHECK(mmic("run --scenario " + source("scenarios/human_guided.json") + " --dt abc --out " +
                 dir.string(),
             dir / "log") == 1);
}

TEST_CASE("full experiment visits all four modes") {
  const fs::path dir = scratch("full");
  CHECK(mmic("run --scenario " + source("scenarios/full_experiment.json") + " --out " +
                 dir.string(),
             dir / "log") == 0);
  const std::string summary = slurp(dir / "summary.json");
  for (const char* m : {"\"waiting\"", "\"scanning\"", "\"recovery\"", "\"human_guided\""}) {
    CAPTURE(m);
    CHECK(summary.find(m) != std::string::npos);
  }
  CHECK(summary.find("\"termination\": \"complete\"") != std::string::npos);
}
