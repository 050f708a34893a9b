//------------------------------------------------------------------------------
//
//   Copyright 2026 The enbench Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#ifndef ENBENCH_ENBENCH_H
#define ENBENCH_ENBENCH_H

/*
 * C interface to the enbench library. Every object is an opaque handle that
 * the caller releases with the matching *_free function. Functions return an
 * enb_status; on failure enb_last_error() describes what went wrong on the
 * calling thread. Strings returned through char** are owned by the caller and
 * released with enb_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ENBENCH_BUILDING_LIBRARY)
#define ENB_API __declspec(dllexport)
#else
#define ENB_API __declspec(dllimport)
#endif
#else
#define ENB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum enb_status
{
  ENB_OK = 0,
  ENB_INVALID_CONFIG,
  ENB_INFEASIBLE_ACTION,
  ENB_INVALID_GRID,
  ENB_OUT_OF_RANGE,
  ENB_UNKNOWN_ITEM,
  ENB_UNKNOWN_BIDDER,
  ENB_DUPLICATE_BID,
  ENB_MISMATCHED_AUCTION,
  ENB_TOO_MANY_ITEMS,
  ENB_INSTANCE_TOO_LARGE,
  ENB_MISSING_PLACEHOLDER,
  ENB_PARSE_FAILURE,
  ENB_AMBIGUOUS_ACTION,
  ENB_UNKNOWN_ITEM_NAME,
  ENB_EXHAUSTED,
  ENB_AUTH_FAILURE,
  ENB_TIMEOUT,
  ENB_SCRIPT_EXHAUSTED,
  ENB_EMPTY_SERIES,
  ENB_IO_FAILURE,
  ENB_INVALID_ARGUMENT, /* null handle, unknown enum name, bad number */
  ENB_INTERNAL
} enb_status;

typedef enum enb_log_level
{
  ENB_LOG_INFO = 0,
  ENB_LOG_WARNING,
  ENB_LOG_ERROR
} enb_log_level;

typedef enum enb_experiment_kind
{
  ENB_EXPERIMENT_BATTERY = 0,
  ENB_EXPERIMENT_AUCTION
} enb_experiment_kind;

/* Dispatch actions as returned by enb_dp_action. */
typedef enum enb_action
{
  ENB_ACTION_CHARGE = 0,
  ENB_ACTION_DISCHARGE,
  ENB_ACTION_HOLD,
  ENB_ACTION_SERVE_LOAD
} enb_action;

typedef struct enb_scenario   enb_scenario;
typedef struct enb_dp         enb_dp;
typedef struct enb_experiment enb_experiment;

typedef void (*enb_log_fn)(enb_log_level level, char const *message, void *user);
/* Called from worker threads; ok is 0 for a failed run. */
typedef void (*enb_progress_fn)(int run_index, int ok, void *user);

ENB_API char const *enb_version(void);
ENB_API char const *enb_git_revision(void);
ENB_API char const *enb_status_name(enb_status status);
/* Message for the last failure on this thread; never NULL. */
ENB_API char const *enb_last_error(void);
ENB_API void        enb_string_free(char *s);

/* Process-wide. Pass NULL to silence logging. */
ENB_API void enb_set_log_callback(enb_log_fn fn, void *user);

/* Battery scenarios. */
ENB_API enb_status enb_scenario_default(enb_scenario **out);
ENB_API enb_status enb_scenario_load(char const *path, enb_scenario **out);
ENB_API enb_status enb_scenario_from_json(char const *json, enb_scenario **out);
ENB_API enb_status enb_scenario_horizon(enb_scenario const *scenario, int *out_days);
ENB_API void       enb_scenario_free(enb_scenario *scenario);

/* Finite-horizon dynamic program. Values are expected cents. */
ENB_API enb_status enb_dp_solve(enb_scenario const *scenario, enb_dp **out);
ENB_API enb_status enb_dp_value(enb_dp const *dp, int day, int64_t soc_wh, double *out_cents);
ENB_API enb_status enb_dp_action(enb_dp const *dp, int day, int64_t soc_wh, int64_t price_cents,
                                 enb_action *out_action);
ENB_API enb_status enb_dp_to_json(enb_dp const *dp, char **out_json);
/* Writes value_table.json and policy_table.json into dir (created if missing). */
ENB_API enb_status enb_dp_write(enb_dp const *dp, char const *dir);
ENB_API void       enb_dp_free(enb_dp *dp);

/* Experiments. */
ENB_API enb_status enb_experiment_load(char const *path, enb_experiment **out);
ENB_API enb_status enb_experiment_from_json(char const *json, char const *base_dir,
                                            enb_experiment **out);
/* Rebuilds the experiment recorded in <dir>/manifest.json, set up to replay
   that directory's transcripts. */
ENB_API enb_status enb_experiment_from_recording(char const *dir, enb_experiment **out);
ENB_API enb_status enb_experiment_default_battery(enb_experiment **out);
ENB_API void       enb_experiment_free(enb_experiment *experiment);

ENB_API enb_status enb_experiment_kind_of(enb_experiment const *experiment,
                                          enb_experiment_kind *out);
ENB_API enb_status enb_experiment_set_seed(enb_experiment *experiment, uint64_t seed);
ENB_API enb_status enb_experiment_set_runs(enb_experiment *experiment, int runs);
ENB_API enb_status enb_experiment_set_parallelism(enb_experiment *experiment, int parallelism);
/* kind is "live", "scripted" or "replay"; source is the script file or the
   recorded output directory and may be NULL to keep the configured one. */
ENB_API enb_status enb_experiment_set_backend(enb_experiment *experiment, char const *kind,
                                              char const *source);
/* 1 when some agent talks to a language model. */
ENB_API int        enb_experiment_needs_backend(enb_experiment const *experiment);
ENB_API enb_status enb_experiment_validate(enb_experiment const *experiment);
ENB_API enb_status enb_experiment_effective_config(enb_experiment const *experiment,
                                                   char **out_json);
/* Runs every Monte Carlo run and writes the output directory. A run that
   fails is counted in out_failed_runs, not reported as an error status. */
ENB_API enb_status enb_experiment_run(enb_experiment const *experiment, char const *out_dir,
                                      enb_progress_fn progress, void *user,
                                      int *out_failed_runs);

/* Validates one config file. kind may be NULL to detect it; out_kind (may be
   NULL) receives a static string naming the detected kind. */
ENB_API enb_status enb_validate_config(char const *path, char const *kind,
                                       char const **out_kind);

/* Re-exports an aggregate.json as "csv" or "json". */
ENB_API enb_status enb_export_aggregate(char const *aggregate_json, char const *format,
                                        char const *out_path);

/* Compares runs/<i>/trajectory.jsonl and aggregate.json between two output
   directories. out_equal is 1 when all match; out_report (may be NULL)
   lists the first differences. */
ENB_API enb_status enb_compare_outputs(char const *dir_a, char const *dir_b, int *out_equal,
                                       char **out_report);

#ifdef __cplusplus
}
#endif

#endif
