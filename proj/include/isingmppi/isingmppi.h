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

/*
 * C interface to the isingmppi library.
 *
 * Every function returns an imppi_status. On failure a human-readable message
 * is available from imppi_last_error() until the next call on the same thread.
 * Handles are opaque; each *_create has a matching *_destroy, which accepts
 * NULL.
 */

#ifndef ISINGMPPI_ISINGMPPI_H
#define ISINGMPPI_ISINGMPPI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(IMPPI_BUILDING_LIBRARY)
#    define IMPPI_API __declspec(dllexport)
#  else
#    define IMPPI_API __declspec(dllimport)
#  endif
#else
#  define IMPPI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum imppi_status {
  IMPPI_OK = 0,
  IMPPI_ERR_INVALID_ARGUMENT = 1, /* bad config key/value, shape mismatch, NULL handle */
  IMPPI_ERR_DOMAIN = 2,           /* value outside the mathematical domain */
  IMPPI_ERR_IO = 3,               /* file could not be read or written */
  IMPPI_ERR_DIVERGED = 4,         /* a trial left the finite domain */
  IMPPI_ERR_BUFFER_TOO_SMALL = 5,
  IMPPI_ERR_INTERNAL = 99
} imppi_status;

typedef enum imppi_init_mode { IMPPI_INIT_ZEROS = 0, IMPPI_INIT_RANDOM = 1 } imppi_init_mode;

typedef struct imppi_config imppi_config;
typedef struct imppi_qubo imppi_qubo;

IMPPI_API const char* imppi_version(void);
IMPPI_API const char* imppi_status_string(imppi_status status);
/* Message of the last failed call on this thread ("" if none). */
IMPPI_API const char* imppi_last_error(void);

/* ---- experiment configuration ------------------------------------------ */

IMPPI_API imppi_status imppi_config_create(imppi_config** out);
IMPPI_API void imppi_config_destroy(imppi_config* cfg);
/* Keys match the CLI flag names without dashes, e.g. "n-traj", "k-speed". */
IMPPI_API imppi_status imppi_config_set(imppi_config* cfg, const char* key, const char* value);
/* Flat `key = value` file; later calls to imppi_config_set still override. */
IMPPI_API imppi_status imppi_config_load_file(imppi_config* cfg, const char* path);
/* Writes the NUL-terminated settings echo into buf. *needed receives the
   required size including the terminator (may be NULL). */
IMPPI_API imppi_status imppi_config_echo(const imppi_config* cfg, char* buf, size_t len,
                                         size_t* needed);

/* Current value of one setting as text, same buffer convention as
   imppi_config_echo. */
IMPPI_API imppi_status imppi_config_get(const imppi_config* cfg, const char* key, char* buf,
                                        size_t len, size_t* needed);

/* ---- harness commands --------------------------------------------------- */

/* Writes traj_<seed>.csv for seeds seed0 .. seed0+n_traj-1 into out_dir. */
IMPPI_API imppi_status imppi_gen_trajectories(const imppi_config* cfg, const char* out_dir);
/* Writes trials/ JSON files and table.csv under the config's out directory. */
IMPPI_API imppi_status imppi_run_table(const imppi_config* cfg);
/* Writes sweep.csv under the config's out directory. */
IMPPI_API imppi_status imppi_run_sweep(const imppi_config* cfg);
/* Runs one trial and writes its JSON to json_path (may be NULL). A diverged
   trial returns IMPPI_ERR_DIVERGED with *mse set to +inf. */
IMPPI_API imppi_status imppi_run_trial(const imppi_config* cfg, const char* json_path,
                                       double* mse, size_t* steps);
/* Writes the QUBO instance of one Ising control step to path. */
IMPPI_API imppi_status imppi_dump_qubo(const imppi_config* cfg, const char* path);

/* ---- QUBO problems and sampling ---------------------------------------- */

/* J is d*d row-major, h has d entries. The problem is stored as given. */
IMPPI_API imppi_status imppi_qubo_create(size_t d, const double* J, const double* h,
                                         imppi_qubo** out);
IMPPI_API imppi_status imppi_qubo_read(const char* path, imppi_qubo** out);
IMPPI_API imppi_status imppi_qubo_write(const imppi_qubo* q, const char* path);
IMPPI_API void imppi_qubo_destroy(imppi_qubo* q);
IMPPI_API size_t imppi_qubo_dim(const imppi_qubo* q);
/* J <- (J + J^T)/2, h <- h + diag(J), diag(J) <- 0. */
IMPPI_API imppi_status imppi_qubo_symmetrize(imppi_qubo* q);
/* bits holds d entries, each 0 or 1. */
IMPPI_API imppi_status imppi_qubo_energy(const imppi_qubo* q, const uint8_t* bits, double* out);

/* Gibbs sampling on a symmetrized problem. bit_means and rounded (either may
   be NULL) receive d entries each. */
IMPPI_API imppi_status imppi_gibbs_sample(const imppi_qubo* q, size_t sweeps, double lambda,
                                          uint64_t seed, imppi_init_mode init, size_t burn_in,
                                          double* bit_means, uint8_t* rounded);
/* Exhaustive minimizer, d <= 20. */
IMPPI_API imppi_status imppi_qubo_brute_force_min(const imppi_qubo* q, uint8_t* argmin,
                                                  double* energy);

#ifdef __cplusplus
}
#endif

#endif /* ISINGMPPI_ISINGMPPI_H */
