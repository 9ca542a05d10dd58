#ifndef GQPT_H
#define GQPT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GqptStatus {
  GQPT_STATUS_OK = 0,
  GQPT_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input or a validation failure.
   */
  GQPT_STATUS_DATA_ERROR = 2,
  /**
   * Singular system, divergent integral or similar.
   */
  GQPT_STATUS_NUMERICAL_ERROR = 3,
  GQPT_STATUS_INVALID_UTF8 = 4,
  GQPT_STATUS_PANIC = 5,
} GqptStatus;

/**
 * A reconstructed or loaded process operator.
 */
typedef struct GqptProcess GqptProcess;

/**
 * A Gaussian Q-function.
 */
typedef struct GqptQForm GqptQForm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * File format version, a static string.
 */
const char *gqpt_version(void);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next `gqpt_*` call on the same thread.
 */
const char *gqpt_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void gqpt_string_free(char *s);

/**
 * Reconstructs a process from a `probe-data` document.
 *
 * # Safety
 * `probe_data_json` must be a valid C string and `out` a valid pointer.
 */
enum GqptStatus gqpt_reconstruct(const char *probe_data_json,
                                 bool trace_preserving,
                                 struct GqptProcess **out);

/**
 * Loads a `process` document.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum GqptStatus gqpt_process_from_json(const char *json, struct GqptProcess **out);

/**
 * Canonical `process` document; free with [`gqpt_string_free`].
 *
 * # Safety
 * `process` must be a live handle and `out` a valid pointer.
 */
enum GqptStatus gqpt_process_to_json(const struct GqptProcess *process, char **out);

/**
 * Number of modes, or 0 for a null handle.
 *
 * # Safety
 * `process` must be null or a live handle.
 */
size_t gqpt_process_modes(const struct GqptProcess *process);

/**
 * Self-consistency residual of a reconstruction; 0 for loaded processes.
 *
 * # Safety
 * `process` must be null or a live handle.
 */
double gqpt_process_residual(const struct GqptProcess *process);

/**
 * # Safety
 * `process` must be null or a handle not yet freed.
 */
void gqpt_process_free(struct GqptProcess *process);

/**
 * Output for the coherent input with amplitudes `re[j] + i im[j]`.
 *
 * # Safety
 * `process` must be a live handle, `re` and `im` must point to `modes`
 * doubles, and `out` must be a valid pointer.
 */
enum GqptStatus gqpt_predict_coherent(const struct GqptProcess *process,
                                      const double *re,
                                      const double *im,
                                      size_t modes,
                                      struct GqptQForm **out);

/**
 * Output for a squeezed-coherent input given as an `input` document.
 *
 * # Safety
 * `process` must be a live handle, `input_json` a valid C string and `out`
 * a valid pointer.
 */
enum GqptStatus gqpt_predict_gaussian(const struct GqptProcess *process,
                                      const char *input_json,
                                      struct GqptQForm **out);

/**
 * Evaluates `Q(z)` at `z_j = re[j] + i im[j]`.
 *
 * # Safety
 * `qform` must be a live handle, `re` and `im` must point to `modes`
 * doubles, and `out` must be a valid pointer.
 */
enum GqptStatus gqpt_qform_eval(const struct GqptQForm *qform,
                                const double *re,
                                const double *im,
                                size_t modes,
                                double *out);

/**
 * Integral of `Q(z)` over phase space with measure `d^2z / pi` per mode.
 *
 * # Safety
 * `qform` must be a live handle and `out` a valid pointer.
 */
enum GqptStatus gqpt_qform_normalization(const struct GqptQForm *qform, double *out);

/**
 * Canonical `qform` document; free with [`gqpt_string_free`].
 *
 * # Safety
 * `qform` must be a live handle and `out` a valid pointer.
 */
enum GqptStatus gqpt_qform_to_json(const struct GqptQForm *qform, char **out);

/**
 * # Safety
 * `qform` must be null or a handle not yet freed.
 */
void gqpt_qform_free(struct GqptQForm *qform);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GQPT_H */
