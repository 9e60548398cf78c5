/* Copyright 2026 The trotterdisorder Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libtrotterdisorder.
 *
 * Every fallible call returns a td_status. On failure a message is available
 * from td_last_error() on the same thread until the next failing call.
 * Strings returned through char** are owned by the caller and must be
 * released with td_string_free(). */

#ifndef TROTTERDISORDER_C_API_H_
#define TROTTERDISORDER_C_API_H_

#include <stddef.h>

#if defined(_WIN32)
#define TD_API __declspec(dllexport)
#else
#define TD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum td_status {
  TD_OK = 0,
  TD_ERR_USAGE = 1,    /* bad argument or configuration */
  TD_ERR_DOMAIN = 2,   /* mathematically undefined request */
  TD_ERR_IO = 3,       /* file system failure */
  TD_ERR_INTERNAL = 4  /* bug or numerical breakdown */
} td_status;

typedef struct td_experiment td_experiment;

TD_API const char *td_version(void);
TD_API const char *td_last_error(void);
TD_API const char *td_status_name(td_status status);
TD_API void td_string_free(char *s);

/* Experiments are configured with the JSON schema documented in
 * trotterdisorder/experiment.hpp. */
TD_API td_status td_experiment_create(const char *config_json, td_experiment **out);
TD_API void td_experiment_destroy(td_experiment *exp);
/* Diagnostics as {"ok", "errors", "warnings"}; never fails on a bad config. */
TD_API td_status td_experiment_validate(const td_experiment *exp, char **diagnostics_json);
TD_API td_status td_experiment_config(const td_experiment *exp, char **config_json);
/* workers <= 0 keeps the configured value. */
TD_API td_status td_experiment_run(td_experiment *exp, int workers);
TD_API td_status td_experiment_summary(const td_experiment *exp, char **summary_json);
TD_API td_status td_experiment_write(const td_experiment *exp, const char *directory);

/* JSON array with one config per curve of the named preset. */
TD_API td_status td_preset_json(const char *name, char **configs_json);

/* Gate program and first-order disorder of a configuration, as JSON.
 * expand_step < 0 lists templates and angles only. */
TD_API td_status td_program_json(const char *config_json, char **program_json);
TD_API td_status td_trace_json(const char *config_json, unsigned long long run, int expand_step, char **trace_json);

/* Worst-case gate count M n < 1/sqrt(2 (1 - F)). *unbounded is set for
 * F = 1, in which case bound and max_steps are left untouched. */
TD_API td_status td_budget(double avg_fidelity, int gates_per_step, double *bound, long long *max_steps,
                           int *unbounded);
TD_API td_status td_fidelity(double delta_phi, double *f_min, double *bures_angle);
TD_API td_status td_averaged_fidelity(double std_dev, double *f_avg);

#ifdef __cplusplus
}
#endif

#endif /* TROTTERDISORDER_C_API_H_ */
