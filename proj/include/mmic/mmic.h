/*
 * Copyright 2026 The mmic Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MMIC_MMIC_H
#define MMIC_MMIC_H

/*
 * C interface of the mmic library. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every call that
 * can fail returns an mmic_status; the message of the last failure on the
 * calling thread is available from mmic_last_error().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MMIC_BUILDING_LIBRARY)
#define MMIC_API __declspec(dllexport)
#else
#define MMIC_API __declspec(dllimport)
#endif
#else
#define MMIC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mmic_status {
  MMIC_OK = 0,
  MMIC_ERR_INVALID_ARGUMENT = 1, /* null handle, bad size, contract violation */
  MMIC_ERR_IO = 2,               /* file missing or not writable */
  MMIC_ERR_CONFIG = 3,           /* malformed or invalid configuration */
  MMIC_ERR_PERCEPTION = 4,       /* trajectory could not be generated */
  MMIC_ERR_INTERNAL = 5
} mmic_status;

/* Mode identifiers, in the order used by mmic_run_mode_seconds. */
typedef enum mmic_mode {
  MMIC_MODE_WAITING = 0,
  MMIC_MODE_SCANNING = 1,
  MMIC_MODE_RECOVERY = 2,
  MMIC_MODE_HUMAN_GUIDED = 3
} mmic_mode;

typedef enum mmic_termination {
  MMIC_TERM_COMPLETE = 0,       /* task progress reached T */
  MMIC_TERM_DURATION = 1,       /* simulated time cap reached */
  MMIC_TERM_EMERGENCY_STOP = 2  /* external wrench exceeded f_max */
} mmic_termination;

typedef struct mmic_robot mmic_robot;
typedef struct mmic_scenario mmic_scenario;
typedef struct mmic_run mmic_run;

MMIC_API const char* mmic_version(void);
MMIC_API const char* mmic_last_error(void);

/* Robot models. A NULL path loads the built-in reference arm. */
MMIC_API mmic_status mmic_robot_load(const char* path, mmic_robot** out);
MMIC_API void mmic_robot_free(mmic_robot* robot);
MMIC_API int mmic_robot_dof(const mmic_robot* robot);

/* pose_out: px, py, pz, qw, qx, qy, qz. q holds dof entries. */
MMIC_API mmic_status mmic_forward_kinematics(const mmic_robot* robot, const double* q,
                                             double pose_out[7]);
/* J_out: 6 x dof, row-major. */
MMIC_API mmic_status mmic_jacobian(const mmic_robot* robot, const double* q, double* J_out);

/* Scenarios; dof sizes the null-space gains and comes from the robot. */
MMIC_API mmic_status mmic_scenario_load(const char* path, const mmic_robot* robot,
                                        mmic_scenario** out);
MMIC_API void mmic_scenario_free(mmic_scenario* scenario);
MMIC_API mmic_status mmic_scenario_set_dt(mmic_scenario* scenario, double dt_s);
MMIC_API mmic_status mmic_scenario_set_duration(mmic_scenario* scenario, double duration_s);
MMIC_API mmic_status mmic_scenario_set_seed(mmic_scenario* scenario, uint64_t seed);
MMIC_API mmic_status mmic_scenario_set_f_max(mmic_scenario* scenario, double f_max);

/*
 * Validates robot and scenario together. On success the parameter table is
 * copied into buf (truncated to buf_len - 1 characters, always terminated
 * when buf_len > 0) and *needed receives the full length plus one.
 */
MMIC_API mmic_status mmic_check(const mmic_robot* robot, const mmic_scenario* scenario,
                                char* buf, size_t buf_len, size_t* needed);

/* Runs to completion. An emergency stop is a normal outcome: the call
 * returns MMIC_OK and mmic_run_termination reports it. */
MMIC_API mmic_status mmic_run_scenario(const mmic_robot* robot, const mmic_scenario* scenario,
                                       mmic_run** out);
MMIC_API void mmic_run_free(mmic_run* run);
MMIC_API mmic_termination mmic_run_termination(const mmic_run* run);
/* Emergency-stop detail; empty otherwise. Valid until the run is freed. */
MMIC_API const char* mmic_run_diagnostic(const mmic_run* run);
MMIC_API int64_t mmic_run_ticks(const mmic_run* run);
MMIC_API double mmic_run_mode_seconds(const mmic_run* run, mmic_mode mode);
MMIC_API double mmic_run_progress(const mmic_run* run);
MMIC_API mmic_status mmic_run_write_csv(const mmic_run* run, const char* path);
MMIC_API mmic_status mmic_run_write_summary(const mmic_run* run, const char* path);

/* Writes the seven SVG panels for a run CSV; *panels receives the count. */
MMIC_API mmic_status mmic_plot(const char* run_csv, const char* out_dir, int* panels);

#ifdef __cplusplus
}
#endif

#endif /* MMIC_MMIC_H */
