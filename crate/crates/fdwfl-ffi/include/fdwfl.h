#ifndef FDWFL_H
#define FDWFL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum FdwflStatus {
  FdwflStatus_Ok = 0,
  FdwflStatus_NullPointer = 1,
  FdwflStatus_InvalidArgument = 2,
  FdwflStatus_ShapeMismatch = 3,
  FdwflStatus_GridMismatch = 4,
  FdwflStatus_MissingStateSpectrum = 5,
  FdwflStatus_EvaluationAtEigenvalue = 6,
  FdwflStatus_IllConditioned = 7,
  FdwflStatus_PeShortfall = 8,
  FdwflStatus_RankDeficient = 9,
  FdwflStatus_Io = 10,
  FdwflStatus_Parse = 11,
} FdwflStatus;

/**
 * Opaque input/output spectrum data handle.
 */
typedef struct FdwflData FdwflData;

/**
 * Opaque state-space model handle.
 */
typedef struct FdwflModel FdwflModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread; valid until the next failing call.
 */
const char *fdwfl_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *fdwfl_version(void);

/**
 * Parse a model from its JSON form (`A`, `B`, `C`, `D` as nested arrays).
 *
 * # Safety
 * `json` must be a NUL-terminated UTF-8 string and `out` a valid pointer.
 */
enum FdwflStatus fdwfl_model_from_json(const char *json, struct FdwflModel **out);

/**
 * The built-in fourth-order benchmark model.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum FdwflStatus fdwfl_model_benchmark(struct FdwflModel **out);

/**
 * # Safety
 * `model` must come from this library and not already be freed.
 */
void fdwfl_model_free(struct FdwflModel *model);

/**
 * State, input, and output dimensions of a model.
 *
 * # Safety
 * All pointers must be valid.
 */
enum FdwflStatus fdwfl_model_dims(const struct FdwflModel *model,
                                  uintptr_t *n_x,
                                  uintptr_t *n_u,
                                  uintptr_t *n_y);

/**
 * Run a `2M`-sample experiment and capture its spectra.
 *
 * `u` is row-major with `2 * m` rows of `n_u` entries; `x0` has `n_x`
 * entries. The state spectrum is retained inside the handle.
 *
 * # Safety
 * Buffers must match the advertised lengths; `out` must be valid.
 */
enum FdwflStatus fdwfl_experiment(const struct FdwflModel *model,
                                  const double *u,
                                  uintptr_t m,
                                  const double *x0,
                                  struct FdwflData **out);

/**
 * Run the default odd-bin multisine experiment with a seeded initial state
 * and optional output noise, like the CLI `simulate` subcommand.
 *
 * # Safety
 * `out` must be valid. `snr <= 0` disables noise.
 */
enum FdwflStatus fdwfl_experiment_multisine(const struct FdwflModel *model,
                                            uintptr_t m,
                                            uintptr_t periods,
                                            double snr,
                                            uint64_t seed,
                                            struct FdwflData **out);

/**
 * Load data from the spectrum CSV pair written by the CLI.
 *
 * # Safety
 * Paths must be NUL-terminated strings; `out` must be valid.
 */
enum FdwflStatus fdwfl_data_from_csv(const char *u_path,
                                     const char *y_path,
                                     struct FdwflData **out);

/**
 * # Safety
 * `data` must come from this library and not already be freed.
 */
void fdwfl_data_free(struct FdwflData *data);

/**
 * Grid size and channel dimensions of a data handle.
 *
 * # Safety
 * All pointers must be valid.
 */
enum FdwflStatus fdwfl_data_dims(const struct FdwflData *data,
                                 uintptr_t *m,
                                 uintptr_t *n_u,
                                 uintptr_t *n_y);

/**
 * Persistence-of-excitation test of the input spectrum (optionally with
 * the phasor channel appended).
 *
 * # Safety
 * Output pointers must be valid.
 */
enum FdwflStatus fdwfl_check_pe(const struct FdwflData *data,
                                uintptr_t order,
                                bool augmented,
                                double tol_rel,
                                bool *is_pe,
                                uintptr_t *rank);

/**
 * Exact FRF/transient evaluation at `z` via the joint two-sided solve.
 *
 * `uz` is interleaved `re, im` of length `2 * n_u`; `yz` and `tz` receive
 * `2 * n_y` doubles each. `condition` may be null.
 *
 * # Safety
 * Buffers must match the dimensions reported by [`fdwfl_data_dims`].
 */
enum FdwflStatus fdwfl_evaluate(const struct FdwflData *data,
                                double z_re,
                                double z_im,
                                const double *uz,
                                uintptr_t l0,
                                double *yz,
                                double *tz,
                                double *condition);

/**
 * Noise-robust FRF/transient estimation with a model-order guess.
 *
 * # Safety
 * Same buffer contract as [`fdwfl_evaluate`].
 */
enum FdwflStatus fdwfl_estimate_noisy(const struct FdwflData *data,
                                      double z_re,
                                      double z_im,
                                      const double *uz,
                                      uintptr_t n_x_guess,
                                      double *yz,
                                      double *tz,
                                      double *condition);

/**
 * Transient-aware membership test of a trajectory against the data.
 *
 * `u` and `y` are row-major `(length x n_u)` and `(length x n_y)`.
 *
 * # Safety
 * Buffers must match the advertised lengths.
 */
enum FdwflStatus fdwfl_membership(const struct FdwflData *data,
                                  const double *u,
                                  const double *y,
                                  uintptr_t length,
                                  bool *feasible,
                                  double *residual);

/**
 * Synthesize the default odd-bin multisine period for grid size `m` into
 * a caller buffer of `2 * m` doubles.
 *
 * # Safety
 * `out` must hold `2 * m` doubles.
 */
enum FdwflStatus fdwfl_multisine_period(uintptr_t m, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDWFL_H */
