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

/* Exercises the shared library through the C header only. */

#include "enbench/enbench.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;
static int checks   = 0;

#define CHECK(cond)                                                                    \
  do                                                                                   \
  {                                                                                    \
    ++checks;                                                                          \
    if (!(cond))                                                                       \
    {                                                                                  \
      ++failures;                                                                      \
      fprintf(stderr, "%s:%d: CHECK failed: %s (last error: %s)\n", __FILE__, __LINE__, \
              #cond, enb_last_error());                                                \
    }                                                                                  \
  } while (0)

#define CHECK_STATUS(expr, expected) CHECK((expr) == (expected))

static int file_exists(char const *path)
{
  FILE *f = fopen(path, "rb");
  if (f == NULL)
  {
    return 0;
  }
  fclose(f);
  return 1;
}

static void join(char *out, size_t size, char const *a, char const *b)
{
  snprintf(out, size, "%s/%s", a, b);
}

static int progress_calls = 0;

static void on_progress(int run_index, int ok, void *user)
{
  (void)run_index;
  (void)ok;
  (void)user;
  ++progress_calls;
}

static void test_basics(void)
{
  CHECK(strlen(enb_version()) > 0);
  CHECK(strlen(enb_git_revision()) > 0);
  CHECK(strcmp(enb_status_name(ENB_OK), "Ok") == 0);
  CHECK(strcmp(enb_status_name(ENB_EMPTY_SERIES), "EmptySeries") == 0);
  CHECK(enb_last_error() != NULL);
  CHECK_STATUS(enb_scenario_default(NULL), ENB_INVALID_ARGUMENT);
  CHECK(strlen(enb_last_error()) > 0);
  enb_scenario_free(NULL);
  enb_dp_free(NULL);
  enb_experiment_free(NULL);
  enb_string_free(NULL);
}

static void test_dp(void)
{
  enb_scenario *sc = NULL;
  enb_dp       *dp = NULL;
  int           horizon = 0;
  double        v = 0.0;
  enb_action    a = ENB_ACTION_HOLD;
  char         *json = NULL;

  CHECK_STATUS(enb_scenario_default(&sc), ENB_OK);
  CHECK_STATUS(enb_scenario_horizon(sc, &horizon), ENB_OK);
  CHECK(horizon == 20);
  CHECK_STATUS(enb_dp_solve(sc, &dp), ENB_OK);
  /* Last day with charge: one step sold at the expected price of 7.50. */
  CHECK_STATUS(enb_dp_value(dp, 20, 5000, &v), ENB_OK);
  CHECK(fabs(v - 750.0) < 1e-9);
  CHECK_STATUS(enb_dp_value(dp, 21, 0, &v), ENB_OK);
  CHECK(v == 0.0);
  CHECK_STATUS(enb_dp_action(dp, 20, 5000, 1000, &a), ENB_OK);
  CHECK(a == ENB_ACTION_DISCHARGE);
  CHECK_STATUS(enb_dp_action(dp, 1, 0, 500, &a), ENB_OK);
  CHECK(a == ENB_ACTION_CHARGE);
  CHECK_STATUS(enb_dp_action(dp, 1, 500, 500, &a), ENB_OUT_OF_RANGE);
  CHECK_STATUS(enb_dp_action(dp, 1, 0, 600, &a), ENB_OUT_OF_RANGE);
  CHECK_STATUS(enb_dp_to_json(dp, &json), ENB_OK);
  CHECK(json != NULL && strstr(json, "\"grid\"") != NULL);
  enb_string_free(json);

  CHECK_STATUS(enb_dp_write(dp, ENBENCH_TEST_OUT "/dp"), ENB_OK);
  CHECK(file_exists(ENBENCH_TEST_OUT "/dp/value_table.json"));
  CHECK(file_exists(ENBENCH_TEST_OUT "/dp/policy_table.json"));
  enb_dp_free(dp);
  enb_scenario_free(sc);

  sc = NULL;
  CHECK_STATUS(enb_scenario_from_json("{\"battery\": {\"step_kwh\": 3}}", &sc), ENB_INVALID_GRID);
  CHECK(sc == NULL);
  CHECK_STATUS(enb_scenario_from_json("not json", &sc), ENB_INVALID_CONFIG);
  CHECK_STATUS(enb_scenario_load(ENBENCH_CONFIG_DIR "/default_scenario.json", &sc), ENB_OK);
  enb_scenario_free(sc);
}

static void test_validate(void)
{
  char const *kind = NULL;
  CHECK_STATUS(enb_validate_config(ENBENCH_CONFIG_DIR "/table1.json", NULL, &kind), ENB_OK);
  CHECK(kind != NULL && strcmp(kind, "auction") == 0);
  CHECK_STATUS(enb_validate_config(ENBENCH_CONFIG_DIR "/model.json", "model", NULL), ENB_OK);
  CHECK_STATUS(enb_validate_config(ENBENCH_CONFIG_DIR "/model.json", "bogus", NULL),
               ENB_INVALID_ARGUMENT);
  CHECK_STATUS(enb_validate_config("/nonexistent.json", NULL, NULL), ENB_IO_FAILURE);
}

static void test_experiment(void)
{
  enb_experiment     *exp = NULL;
  enb_experiment     *rep = NULL;
  enb_experiment_kind kind;
  int                 failed = -1;
  int                 equal  = 0;
  char               *report = NULL;
  char               *cfg    = NULL;
  char                path[1024];

  CHECK_STATUS(enb_experiment_load(ENBENCH_CONFIG_DIR "/battery_scripted.json", &exp), ENB_OK);
  CHECK_STATUS(enb_experiment_kind_of(exp, &kind), ENB_OK);
  CHECK(kind == ENB_EXPERIMENT_BATTERY);
  CHECK(enb_experiment_needs_backend(exp) == 1);
  CHECK_STATUS(enb_experiment_set_runs(exp, 3), ENB_OK);
  CHECK_STATUS(enb_experiment_set_runs(exp, 0), ENB_INVALID_ARGUMENT);
  CHECK_STATUS(enb_experiment_set_runs(exp, 3), ENB_OK);
  CHECK_STATUS(enb_experiment_set_seed(exp, 11), ENB_OK);
  CHECK_STATUS(enb_experiment_set_backend(exp, "carrier-pigeon", NULL), ENB_INVALID_ARGUMENT);
  CHECK_STATUS(enb_experiment_validate(exp), ENB_OK);
  CHECK_STATUS(enb_experiment_effective_config(exp, &cfg), ENB_OK);
  CHECK(cfg != NULL && strstr(cfg, "\"seed\": 11") != NULL);
  enb_string_free(cfg);

  progress_calls = 0;
  CHECK_STATUS(enb_experiment_run(exp, ENBENCH_TEST_OUT "/a", on_progress, NULL, &failed), ENB_OK);
  CHECK(failed == 0);
  CHECK(progress_calls == 3);
  CHECK_STATUS(enb_experiment_set_parallelism(exp, 4), ENB_OK);
  CHECK_STATUS(enb_experiment_run(exp, ENBENCH_TEST_OUT "/b", NULL, NULL, &failed), ENB_OK);
  CHECK_STATUS(enb_compare_outputs(ENBENCH_TEST_OUT "/a", ENBENCH_TEST_OUT "/b", &equal, &report),
               ENB_OK);
  CHECK(equal == 1);
  enb_string_free(report);
  report = NULL;

  join(path, sizeof path, ENBENCH_TEST_OUT, "a/runs/2/trajectory.jsonl");
  CHECK(file_exists(path));

  CHECK_STATUS(enb_experiment_from_recording(ENBENCH_TEST_OUT "/a", &rep), ENB_OK);
  CHECK_STATUS(enb_experiment_run(rep, ENBENCH_TEST_OUT "/replayed", NULL, NULL, &failed), ENB_OK);
  CHECK(failed == 0);
  CHECK_STATUS(
      enb_compare_outputs(ENBENCH_TEST_OUT "/a", ENBENCH_TEST_OUT "/replayed", &equal, NULL),
      ENB_OK);
  CHECK(equal == 1);

  CHECK_STATUS(enb_experiment_set_seed(exp, 12), ENB_OK);
  CHECK_STATUS(enb_experiment_run(exp, ENBENCH_TEST_OUT "/c", NULL, NULL, &failed), ENB_OK);
  CHECK_STATUS(enb_compare_outputs(ENBENCH_TEST_OUT "/a", ENBENCH_TEST_OUT "/c", &equal, &report),
               ENB_OK);
  CHECK(equal == 0);
  CHECK(report != NULL && strlen(report) > 0);
  enb_string_free(report);

  CHECK_STATUS(enb_export_aggregate(ENBENCH_TEST_OUT "/a/aggregate.json", "csv",
                                    ENBENCH_TEST_OUT "/export.csv"),
               ENB_OK);
  CHECK(file_exists(ENBENCH_TEST_OUT "/export.csv"));
  CHECK_STATUS(enb_export_aggregate(ENBENCH_TEST_OUT "/a/aggregate.json", "xml",
                                    ENBENCH_TEST_OUT "/export.xml"),
               ENB_INVALID_ARGUMENT);

  enb_experiment_free(rep);
  enb_experiment_free(exp);

  CHECK_STATUS(enb_experiment_load(ENBENCH_CONFIG_DIR "/auction_straightforward.json", &exp), ENB_OK);
  CHECK_STATUS(enb_experiment_kind_of(exp, &kind), ENB_OK);
  CHECK(kind == ENB_EXPERIMENT_AUCTION);
  CHECK(enb_experiment_needs_backend(exp) == 0);
  CHECK_STATUS(enb_experiment_set_runs(exp, 2), ENB_OK);
  CHECK_STATUS(enb_experiment_run(exp, ENBENCH_TEST_OUT "/auction", NULL, NULL, &failed), ENB_OK);
  CHECK(file_exists(ENBENCH_TEST_OUT "/auction/manifest.json"));
  enb_experiment_free(exp);
}

int main(void)
{
  enb_set_log_callback(NULL, NULL);
  test_basics();
  test_dp();
  test_validate();
  test_experiment();
  printf("%d checks, %d failures\n", checks, failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
