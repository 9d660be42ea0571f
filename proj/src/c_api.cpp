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

#include "mmic/mmic.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "mmic/plot.hpp"
#include "mmic/robot_model_io.hpp"
#include "mmic/scenario_io.hpp"
#include "mmic/sim.hpp"

struct mmic_robot {
  mmic::RobotModel model;
};

struct mmic_scenario {
  mmic::Scenario scenario;
};

struct mmic_run {
  mmic::RunResult result;
  mmic::Scenario scenario;
};

namespace {

thread_local std::string g_last_error;

mmic_status fail(mmic_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps exceptions escaping the C++ core to status codes.
template <class F>
mmic_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const mmic::ConfigError& e) {
    return fail(MMIC_ERR_CONFIG, e.what());
  } catch (const mmic::ContractViolation& e) {
    return fail(MMIC_ERR_CONFIG, e.what());
  } catch (const mmic::PerceptionError& e) {
    return fail(MMIC_ERR_PERCEPTION, e.what());
  } catch (const mmic::PlotError& e) {
    return fail(MMIC_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MMIC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MMIC_ERR_IO, e.what());
  }
}

}  // namespace

extern "C" {

const char* mmic_version(void) { return "0.1.0"; }

const char* mmic_last_error(void) { return g_last_error.c_str(); }

mmic_status mmic_robot_load(const char* path, mmic_robot** out) {
  if (!out) return fail(MMIC_ERR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  return guarded([&] {
    auto* r = new mmic_robot{path ? mmic::load_robot_model(path) : mmic::reference_model()};
    try {
      r->model.validate();
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
    return MMIC_OK;
  });
}

void mmic_robot_free(mmic_robot* robot) { delete robot; }

int mmic_robot_dof(const mmic_robot* robot) { return robot ? robot->model.dof() : 0; }

mmic_status mmic_forward_kinematics(const mmic_robot* robot, const double* q, double pose_out[7]) {
  if (!robot || !q || !pose_out) return fail(MMIC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const mmic::VecX qv = Eigen::Map<const mmic::VecX>(q, robot->model.dof());
    const mmic::Pose p = mmic::forward_kinematics(robot->model, qv);
    const double v[7] = {p.p.x(), p.p.y(), p.p.z(), p.r.w(), p.r.x(), p.r.y(), p.r.z()};
    std::copy(v, v + 7, pose_out);
    return MMIC_OK;
  });
}

mmic_status mmic_jacobian(const mmic_robot* robot, const double* q, double* J_out) {
  if (!robot || !q || !J_out) return fail(MMIC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const int n = robot->model.dof();
    const mmic::VecX qv = Eigen::Map<const mmic::VecX>(q, n);
    const mmic::Mat6X J = mmic::jacobian(robot->model, qv);
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < n; ++c) J_out[r * n + c] = J(r, c);
    }
    return MMIC_OK;
  });
}

mmic_status mmic_scenario_load(const char* path, const mmic_robot* robot, mmic_scenario** out) {
  if (!out) return fail(MMIC_ERR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  if (!path || !robot) return fail(MMIC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mmic_scenario{mmic::load_scenario(path, robot->model.dof())};
    return MMIC_OK;
  });
}

void mmic_scenario_free(mmic_scenario* scenario) { delete scenario; }

mmic_status mmic_scenario_set_dt(mmic_scenario* s, double dt_s) {
  if (!s) return fail(MMIC_ERR_INVALID_ARGUMENT, "null scenario");
  if (!(dt_s > 0.0)) return fail(MMIC_ERR_INVALID_ARGUMENT, "dt must be positive");
  s->scenario.dt = dt_s;
  return MMIC_OK;
}

mmic_status mmic_scenario_set_duration(mmic_scenario* s, double duration_s) {
  if (!s) return fail(MMIC_ERR_INVALID_ARGUMENT, "null scenario");
  if (!(duration_s > 0.0)) return fail(MMIC_ERR_INVALID_ARGUMENT, "duration must be positive");
  s->scenario.duration = duration_s;
  return MMIC_OK;
}

mmic_status mmic_scenario_set_seed(mmic_scenario* s, uint64_t seed) {
  if (!s) return fail(MMIC_ERR_INVALID_ARGUMENT, "null scenario");
  s->scenario.seed = seed;
  return MMIC_OK;
}

mmic_status mmic_scenario_set_f_max(mmic_scenario* s, double f_max) {
  if (!s) return fail(MMIC_ERR_INVALID_ARGUMENT, "null scenario");
  if (!(f_max > 0.0)) return fail(MMIC_ERR_INVALID_ARGUMENT, "f_max must be positive");
  s->scenario.f_max = mmic::Vec6::Constant(f_max);
  return MMIC_OK;
}

mmic_status mmic_check(const mmic_robot* robot, const mmic_scenario* scenario, char* buf,
                       size_t buf_len, size_t* needed) {
  if (!robot || !scenario) return fail(MMIC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string report = mmic::check_report(robot->model, scenario->scenario);
    if (needed) *needed = report.size() + 1;
    if (buf && buf_len > 0) {
      const std::size_t k = std::min(report.size(), buf_len - 1);
      std::memcpy(buf, report.data(), k);
      buf[k] = '\0';
    }
    return MMIC_OK;
  });
}

mmic_status mmic_run_scenario(const mmic_robot* robot, const mmic_scenario* scenario,
                              mmic_run** out) {
  if (!out) return fail(MMIC_ERR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  if (!robot || !scenario) return fail(MMIC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mmic_run{mmic::run_scenario(robot->model, scenario->scenario), scenario->scenario};
    return MMIC_OK;
  });
}

void mmic_run_free(mmic_run* run) { delete run; }

mmic_termination mmic_run_termination(const mmic_run* run) {
  if (!run) return MMIC_TERM_DURATION;
  switch (run->result.summary.termination) {
    case mmic::Termination::Complete: return MMIC_TERM_COMPLETE;
    case mmic::Termination::Duration: return MMIC_TERM_DURATION;
    case mmic::Termination::EmergencyStop: return MMIC_TERM_EMERGENCY_STOP;
  }
  return MMIC_TERM_DURATION;
}

const char* mmic_run_diagnostic(const mmic_run* run) {
  return run ? run->result.summary.diagnostic.c_str() : "";
}

int64_t mmic_run_ticks(const mmic_run* run) { return run ? run->result.summary.ticks : 0; }

double mmic_run_mode_seconds(const mmic_run* run, mmic_mode mode) {
  if (!run || mode < MMIC_MODE_WAITING || mode > MMIC_MODE_HUMAN_GUIDED) return 0.0;
  return run->result.summary.mode_seconds[static_cast<int>(mode)];
}

double mmic_run_progress(const mmic_run* run) { return run ? run->result.summary.t_p : 0.0; }

mmic_status mmic_run_write_csv(const mmic_run* run, const char* path) {
  if (!run || !path) return fail(MMIC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    mmic::write_run_csv(run->result, path);
    return MMIC_OK;
  });
}

mmic_status mmic_run_write_summary(const mmic_run* run, const char* path) {
  if (!run || !path) return fail(MMIC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    mmic::write_summary_json(run->result, run->scenario, path);
    return MMIC_OK;
  });
}

mmic_status mmic_plot(const char* run_csv, const char* out_dir, int* panels) {
  if (!run_csv || !out_dir) return fail(MMIC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto files = mmic::plot_run(run_csv, out_dir);
    if (panels) *panels = static_cast<int>(files.size());
    return MMIC_OK;
  });
}

}  // extern "C"
