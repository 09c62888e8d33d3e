/* Copyright 2026 The redeploy Authors
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

/* C interface of libredeploy.
 *
 * Every call returns a redeploy_status. On failure the message is kept per
 * thread and read with redeploy_last_error(); validation failures list one
 * problem per line. Handles are opaque and owned by the caller, who frees
 * them with the matching *_free function. Strings returned through char**
 * are freed with redeploy_string_free. */

#ifndef REDEPLOY_REDEPLOY_H_
#define REDEPLOY_REDEPLOY_H_

#include <stddef.h>
#include <stdint.h>

#if defined(REDEPLOY_BUILDING_LIBRARY)
#define REDEPLOY_API __attribute__((visibility("default")))
#else
#define REDEPLOY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum redeploy_status {
  REDEPLOY_OK = 0,
  REDEPLOY_ERR_VALIDATION = 1, /* configuration or input rejected */
  REDEPLOY_ERR_RUNTIME = 2,    /* solver, I/O or worker failure */
  REDEPLOY_ERR_ARGUMENT = 3,   /* null handle, bad index, unknown name */
  REDEPLOY_ERR_INTERNAL = 4    /* anything else, including allocation */
} redeploy_status;

typedef struct redeploy_config redeploy_config;
typedef struct redeploy_result redeploy_result;

typedef void (*redeploy_log_fn)(const char* line, void* user);

typedef struct redeploy_run_options {
  const char* freeze_paths; /* may be NULL */
  int write_files;          /* nonzero: write CSVs and manifest to output_dir */
  int write_audit;          /* nonzero: also write audit.jsonl */
  redeploy_log_fn log;      /* may be NULL */
  void* log_user;
} redeploy_run_options;

REDEPLOY_API const char* redeploy_version(void);
REDEPLOY_API const char* redeploy_last_error(void);
REDEPLOY_API void redeploy_string_free(char* s);

/* ---- configuration ---- */
REDEPLOY_API redeploy_status redeploy_config_default(const char* preset, redeploy_config** out);
REDEPLOY_API redeploy_status redeploy_config_load(const char* path, redeploy_config** out);
REDEPLOY_API redeploy_status redeploy_config_parse(const char* json_text, redeploy_config** out);
REDEPLOY_API void redeploy_config_free(redeploy_config* cfg);
REDEPLOY_API redeploy_status redeploy_config_set_seed(redeploy_config* cfg, uint64_t seed);
REDEPLOY_API redeploy_status redeploy_config_set_output_dir(redeploy_config* cfg, const char* dir);
/* "saa", "sro" or "both" */
REDEPLOY_API redeploy_status redeploy_config_set_method(redeploy_config* cfg, const char* method);
/* "hub_and_spoke" or "fully_connected" */
REDEPLOY_API redeploy_status redeploy_config_set_network(redeploy_config* cfg, const char* design);
REDEPLOY_API redeploy_status redeploy_config_set_jobs(redeploy_config* cfg, int jobs);
REDEPLOY_API redeploy_status redeploy_config_to_json(const redeploy_config* cfg, char** json_out);

/* ---- simulation and experiments ---- */

/* Writes demand.csv, capacity.csv and flows.csv for the testing paths. */
REDEPLOY_API redeploy_status redeploy_simulate(const redeploy_config* cfg, const char* freeze_paths);

REDEPLOY_API redeploy_status redeploy_run(const redeploy_config* cfg, const redeploy_run_options* options,
                                          redeploy_result** out);
REDEPLOY_API void redeploy_result_free(redeploy_result* res);
REDEPLOY_API size_t redeploy_result_num_cells(const redeploy_result* res);
REDEPLOY_API size_t redeploy_result_num_weeks(const redeploy_result* res);
/* Method label ("saa" or "sro") of a cell; NULL on a bad index. */
REDEPLOY_API const char* redeploy_result_cell_method(const redeploy_result* res, size_t cell);
/* Metric of one week (0-based), or the mean over weeks when week < 0.
 * Metric names: cost, planned, emergency, cancellation, cancellation_fee,
 * shortage, coordination, transfers, miles. */
REDEPLOY_API redeploy_status redeploy_result_metric(const redeploy_result* res, size_t cell, int week,
                                                    const char* metric, double* value);
REDEPLOY_API double redeploy_result_wall_seconds(const redeploy_result* res);

/* Plans one week for testing path h and training set m at radius epsilon
 * and returns it as JSON. */
REDEPLOY_API redeploy_status redeploy_plan_week(const redeploy_config* cfg, int h, int m, int week, double epsilon,
                                                const char* freeze_paths, char** json_out);

/* Merges metrics.csv from the input directories into summary tables written
 * to out_dir; the summary CSV text is returned when summary_out is given. */
REDEPLOY_API redeploy_status redeploy_report(const char* const* input_dirs, size_t num_inputs, const char* out_dir,
                                             char** summary_out);

#ifdef __cplusplus
}
#endif

#endif /* REDEPLOY_REDEPLOY_H_ */
