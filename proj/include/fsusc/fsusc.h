/* Copyright The fsusc Authors. */
/* SPDX-License-Identifier: Apache-2.0 */

#ifndef FSUSC_FSUSC_H
#define FSUSC_FSUSC_H

#include <stddef.h>
#include <stdint.h>

#if defined(FSUSC_BUILDING_LIBRARY)
#define FSUSC_API __attribute__((visibility("default")))
#else
#define FSUSC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fsusc_status
{
  FSUSC_OK = 0,
  FSUSC_ERR_INVALID_ARGUMENT = 1,
  FSUSC_ERR_CONFIG = 2,
  FSUSC_ERR_IO = 3,
  FSUSC_ERR_CHECKPOINT_CORRUPT = 4,
  FSUSC_ERR_STALE_CHECKPOINT = 5,
  FSUSC_ERR_EMPTY_DOMAIN = 6,
  FSUSC_ERR_NOT_EQUILIBRIUM = 7,
  FSUSC_ERR_RELAX_FAILED = 8,
  FSUSC_ERR_DENSE_LIMIT = 9,
  FSUSC_ERR_NUMERICAL = 10,
  FSUSC_ERR_INTERNAL = 11
} fsusc_status;

typedef struct fsusc_config fsusc_config;
typedef struct fsusc_state fsusc_state;
typedef struct fsusc_sweep fsusc_sweep;

FSUSC_API const char *fsusc_version(void);
/* Message of the last failed call on this thread; never NULL. */
FSUSC_API const char *fsusc_last_error(void);
FSUSC_API const char *fsusc_status_name(fsusc_status status);
/* Releases strings and arrays returned by this library. */
FSUSC_API void fsusc_string_free(char *s);
FSUSC_API void fsusc_doubles_free(double *values);

/* Configuration */
FSUSC_API fsusc_status fsusc_config_load(const char *path, fsusc_config **out);
FSUSC_API fsusc_status fsusc_config_parse(const char *json_text, fsusc_config **out);
FSUSC_API fsusc_status fsusc_config_to_json(const fsusc_config *config, char **out);
FSUSC_API fsusc_status fsusc_config_set_workers(fsusc_config *config, int workers);
/* none, projection, exact, laplacian or circulant */
FSUSC_API fsusc_status fsusc_config_set_precond(fsusc_config *config, const char *kind);
FSUSC_API fsusc_status fsusc_config_set_tol(fsusc_config *config, double tol);
/* Planned frequencies, descending. Free *omegas with fsusc_doubles_free. */
FSUSC_API fsusc_status fsusc_config_frequencies(const fsusc_config *config, double **omegas,
                                                size_t *count);
FSUSC_API fsusc_status fsusc_config_output_dir(const fsusc_config *config, char **out);
FSUSC_API fsusc_status fsusc_config_set_output_dir(fsusc_config *config, const char *dir);
FSUSC_API void fsusc_config_free(fsusc_config *config);

/* Equilibrium */
typedef struct fsusc_state_info
{
  uint32_t dims[3];
  uint64_t interior_cells;
  double residual;
  int64_t steps;
  double beta_min;
  double beta_max;
} fsusc_state_info;

/* Step callback: (step, residual, dt, user). May be NULL. */
typedef void (*fsusc_relax_callback)(int64_t, double, double, void *);

FSUSC_API fsusc_status fsusc_relax(const fsusc_config *config, fsusc_relax_callback on_step,
                                   void *user, fsusc_state **out);
FSUSC_API fsusc_status fsusc_state_save(const fsusc_state *state, const char *path);
/* Fails with FSUSC_ERR_STALE_CHECKPOINT when the file was written for other
   mesh or material parameters. */
FSUSC_API fsusc_status fsusc_state_load(const fsusc_config *config, const char *path,
                                        fsusc_state **out);
FSUSC_API fsusc_status fsusc_state_info_get(const fsusc_state *state, fsusc_state_info *info);
FSUSC_API void fsusc_state_free(fsusc_state *state);

/* Frequency sweep */
typedef struct fsusc_row_info
{
  double omega;
  int converged;
  int solved[3];
  int64_t iterations[3];
  double error[3];
  /* chi[l][k], row major */
  double chi_re[9];
  double chi_im[9];
  double wall_time;
} fsusc_row_info;

/* Row callback: (row index, omega, user), called as rows complete. */
typedef void (*fsusc_row_callback)(size_t, double, void *);

FSUSC_API fsusc_status fsusc_sweep_run(const fsusc_config *config, const fsusc_state *state,
                                       fsusc_row_callback on_row, void *user, fsusc_sweep **out);
/* Rows not yet started are skipped once this is called. */
FSUSC_API void fsusc_request_cancel(void);
FSUSC_API size_t fsusc_sweep_row_count(const fsusc_sweep *sweep);
FSUSC_API fsusc_status fsusc_sweep_row(const fsusc_sweep *sweep, size_t index, fsusc_row_info *out);
FSUSC_API int fsusc_sweep_all_converged(const fsusc_sweep *sweep);
/* Writes iterations.csv, chi.csv, residuals.csv and metadata.json. */
FSUSC_API fsusc_status fsusc_sweep_write(const fsusc_sweep *sweep, const char *dir);
FSUSC_API void fsusc_sweep_free(fsusc_sweep *sweep);

/* Descending singular values of the system operator at omega. restricted != 0
   composes with a per-cell tangent basis. Free *sigma with fsusc_doubles_free. */
FSUSC_API fsusc_status fsusc_svd(const fsusc_config *config, const fsusc_state *state,
                                 double omega, const char *precond, int restricted,
                                 double **sigma, size_t *count);

/* Runs the 4x4x4 bench; each line of the pass/fail table goes to on_line. */
typedef void (*fsusc_line_callback)(const char *, void *);
FSUSC_API fsusc_status fsusc_bench_run(int workers, fsusc_line_callback on_line, void *user,
                                       int *all_passed);

#ifdef __cplusplus
}
#endif

#endif /* FSUSC_FSUSC_H */
