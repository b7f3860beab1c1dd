/*
 Copyright 2026 The isingmppi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

/* Exercises the C interface from C. Argument: a scratch directory. */

#include "isingmppi/isingmppi.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                    \
  do {                                                                  \
    if (!(cond)) {                                                      \
      fprintf(stderr, "%s:%d: expected %s (%s)\n", __FILE__, __LINE__, \
              #cond, imppi_last_error());                               \
      ++failures;                                                       \
    }                                                                   \
  } while (0)

static void join(char* out, size_t len, const char* dir, const char* name) {
  snprintf(out, len, "%s/%s", dir, name);
}

static void test_status_strings(void) {
  EXPECT(strlen(imppi_version()) > 0);
  EXPECT(strcmp(imppi_status_string(IMPPI_OK), "ok") == 0);
  EXPECT(strcmp(imppi_status_string(IMPPI_ERR_IO), "i/o error") == 0);
}

static void test_config(void) {
  imppi_config* cfg = NULL;
  EXPECT(imppi_config_create(&cfg) == IMPPI_OK);
  EXPECT(imppi_config_set(cfg, "lambda", "0.5") == IMPPI_OK);
  EXPECT(imppi_config_set(cfg, "lambda", "half") == IMPPI_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(imppi_last_error()) > 0);
  EXPECT(imppi_config_set(cfg, "bogus", "1") == IMPPI_ERR_INVALID_ARGUMENT);
  EXPECT(imppi_config_set(NULL, "lambda", "1") == IMPPI_ERR_INVALID_ARGUMENT);

  char small[4];
  size_t needed = 0;
  EXPECT(imppi_config_get(cfg, "lambda", small, sizeof small, &needed) == IMPPI_OK);
  EXPECT(strcmp(small, "0.5") == 0);
  EXPECT(needed == 4);
  EXPECT(imppi_config_get(cfg, "n-traj", small, 2, &needed) == IMPPI_ERR_BUFFER_TOO_SMALL);
  EXPECT(needed == 3);

  EXPECT(imppi_config_echo(cfg, NULL, 0, &needed) == IMPPI_ERR_BUFFER_TOO_SMALL);
  char* text = malloc(needed);
  EXPECT(imppi_config_echo(cfg, text, needed, NULL) == IMPPI_OK);
  EXPECT(strstr(text, "lambda = 0.5\n") != NULL);
  free(text);
  imppi_config_destroy(cfg);
  imppi_config_destroy(NULL);
}

static void test_qubo(const char* dir) {
  /* Two spins: E = a0 + 3 a1 + 2 a0 a1 after symmetrization. */
  const double J[4] = {0.0, 2.0, 0.0, 0.0};
  const double h[2] = {1.0, 3.0};
  imppi_qubo* q = NULL;
  EXPECT(imppi_qubo_create(2, J, h, &q) == IMPPI_OK);
  EXPECT(imppi_qubo_dim(q) == 2);
  EXPECT(imppi_qubo_symmetrize(q) == IMPPI_OK);
  const uint8_t both[2] = {1, 1};
  double e = 0.0;
  EXPECT(imppi_qubo_energy(q, both, &e) == IMPPI_OK);
  EXPECT(e == 6.0);

  uint8_t argmin[2] = {9, 9};
  EXPECT(imppi_qubo_brute_force_min(q, argmin, &e) == IMPPI_OK);
  EXPECT(argmin[0] == 0 && argmin[1] == 0 && e == 0.0);

  double means[2];
  uint8_t rounded[2];
  EXPECT(imppi_gibbs_sample(q, 200, 0.01, 7, IMPPI_INIT_RANDOM, 10, means, rounded) == IMPPI_OK);
  EXPECT(rounded[0] == 0 && rounded[1] == 0);
  EXPECT(imppi_gibbs_sample(q, 0, 0.01, 7, IMPPI_INIT_ZEROS, 0, means, rounded) ==
         IMPPI_ERR_INVALID_ARGUMENT);
  EXPECT(imppi_gibbs_sample(q, 10, -1.0, 7, IMPPI_INIT_ZEROS, 0, means, rounded) != IMPPI_OK);

  char path[1024];
  join(path, sizeof path, dir, "two.qubo");
  EXPECT(imppi_qubo_write(q, path) == IMPPI_OK);
  imppi_qubo* back = NULL;
  EXPECT(imppi_qubo_read(path, &back) == IMPPI_OK);
  EXPECT(imppi_qubo_dim(back) == 2);
  EXPECT(imppi_qubo_energy(back, both, &e) == IMPPI_OK);
  EXPECT(e == 6.0);
  imppi_qubo_destroy(back);
  join(path, sizeof path, dir, "missing/none.qubo");
  back = NULL;
  EXPECT(imppi_qubo_read(path, &back) == IMPPI_ERR_IO);
  EXPECT(back == NULL);
  imppi_qubo_destroy(q);
}

static void test_runs(const char* dir) {
  imppi_config* cfg = NULL;
  EXPECT(imppi_config_create(&cfg) == IMPPI_OK);
  EXPECT(imppi_config_set(cfg, "controller", "linear") == IMPPI_OK);
  EXPECT(imppi_config_set(cfg, "sweeps", "50") == IMPPI_OK);
  EXPECT(imppi_config_set(cfg, "iters", "1") == IMPPI_OK);

  char path[1024];
  join(path, sizeof path, dir, "trial.json");
  double mse = -1.0;
  size_t steps = 0;
  EXPECT(imppi_run_trial(cfg, path, &mse, &steps) == IMPPI_OK);
  EXPECT(isfinite(mse) && mse >= 0.0);
  EXPECT(steps > 0);
  FILE* f = fopen(path, "r");
  EXPECT(f != NULL);
  if (f) fclose(f);

  join(path, sizeof path, dir, "trajs");
  EXPECT(imppi_gen_trajectories(cfg, path) == IMPPI_OK);
  join(path, sizeof path, dir, "trajs/traj_0.csv");
  f = fopen(path, "r");
  EXPECT(f != NULL);
  if (f) fclose(f);

  join(path, sizeof path, dir, "step0.qubo");
  EXPECT(imppi_dump_qubo(cfg, path) == IMPPI_OK);
  imppi_qubo* q = NULL;
  EXPECT(imppi_qubo_read(path, &q) == IMPPI_OK);
  EXPECT(imppi_qubo_dim(q) == 80);
  imppi_qubo_destroy(q);

  EXPECT(imppi_run_trial(NULL, NULL, &mse, &steps) == IMPPI_ERR_INVALID_ARGUMENT);
  imppi_config_destroy(cfg);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: %s <scratch-dir>\n", argv[0]);
    return 2;
  }
  test_status_strings();
  test_config();
  test_qubo(argv[1]);
  test_runs(argv[1]);
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
