/* roughflow C API, generated by cbindgen; do not edit */

#ifndef ROUGHFLOW_H
#define ROUGHFLOW_H

/* This file is auto-generated. Regenerate with: cbindgen --crate roughflow-ffi --output include/roughflow.h */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum RfStatus {
  RF_STATUS_OK = 0,
  RF_STATUS_NULL_POINTER = 1,
  RF_STATUS_INVALID_INPUT = 2,
  RF_STATUS_GRID_MISMATCH = 3,
  RF_STATUS_BAD_EXPONENT = 4,
  RF_STATUS_IO_ERROR = 5,
  RF_STATUS_VERIFICATION_FAILED = 6,
} RfStatus;

// An opaque rough path.
typedef struct RfRoughPath RfRoughPath;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The last error message raised on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *rf_last_error(void);

// Canonically lift a piecewise-linear path. `times` has `len` entries,
// `points` is row-major `len × dim`. On success writes a new handle to
// `out`; free it with `rf_roughpath_free`.
//
// # Safety
// `times`, `points` and `out` must be valid for the documented lengths.
enum RfStatus rf_lift(const double *times,
                      const double *points,
                      uintptr_t len,
                      uintptr_t dim,
                      struct RfRoughPath **out);

// Load a rough path from a JSON file.
//
// # Safety
// `path` must be a valid NUL-terminated string, `out` a valid pointer.
enum RfStatus rf_roughpath_read_json(const char *path, struct RfRoughPath **out);

// Write a rough path to a JSON file.
//
// # Safety
// `handle` must come from this library; `path` must be NUL-terminated.
enum RfStatus rf_roughpath_write_json(const struct RfRoughPath *handle, const char *path);

// # Safety
// `handle` must come from this library and not be freed twice.
void rf_roughpath_free(struct RfRoughPath *handle);

// Grid size (number of stored time points).
//
// # Safety
// `handle` must be a live handle from this library.
uintptr_t rf_grid_len(const struct RfRoughPath *handle);

// Copy the grid times into `out` (capacity `rf_grid_len` doubles).
//
// # Safety
// `out` must hold at least `rf_grid_len(handle)` doubles.
enum RfStatus rf_times(const struct RfRoughPath *handle, double *out);

// Copy the running level-1 value X¹_{0,t_k} into `out` (`rf_dim` doubles).
//
// # Safety
// `out` must hold at least `rf_dim(handle)` doubles.
enum RfStatus rf_level1_at(const struct RfRoughPath *handle, uintptr_t k, double *out);

// Copy the running level-2 value X²_{0,t_k} into `out`, row-major
// (`rf_dim` squared doubles).
//
// # Safety
// `out` must hold at least `rf_dim(handle)²` doubles.
enum RfStatus rf_level2_at(const struct RfRoughPath *handle, uintptr_t k, double *out);

// Path dimension.
//
// # Safety
// `handle` must be a live handle from this library.
uintptr_t rf_dim(const struct RfRoughPath *handle);

// p-variation of one tensor level (level 1 or 2).
//
// # Safety
// `handle` and `out` must be valid.
enum RfStatus rf_p_variation(const struct RfRoughPath *handle,
                             double p,
                             uint8_t level,
                             double *out);

// Largest Chen defect over every grid triple.
//
// # Safety
// `handle` and `out` must be valid.
enum RfStatus rf_chen_residual(const struct RfRoughPath *handle, double *out);

// d_p between two rough paths on a shared grid.
//
// # Safety
// All pointers must be valid.
enum RfStatus rf_dist_p(const struct RfRoughPath *left,
                        const struct RfRoughPath *right,
                        double p,
                        double *out);

// d_q (q > p) between two rough paths on a shared grid.
//
// # Safety
// All pointers must be valid.
enum RfStatus rf_dist_q(const struct RfRoughPath *left,
                        const struct RfRoughPath *right,
                        double p,
                        double q,
                        double *out);

// The constant C of the bound d_q <= C d_p^{p/q}.
//
// # Safety
// All pointers must be valid.
enum RfStatus rf_q_bound_constant(const struct RfRoughPath *left,
                                  const struct RfRoughPath *right,
                                  double p,
                                  double q,
                                  double *out);

// Reparameterize onto the control scale; writes a new handle.
//
// # Safety
// `handle` and `out` must be valid.
enum RfStatus rf_reparameterize(const struct RfRoughPath *handle,
                                double p,
                                struct RfRoughPath **out);

// (λX): level 1 scaled by λ, level 2 by λ²; writes a new handle.
//
// # Safety
// `handle` and `out` must be valid.
enum RfStatus rf_scalar_mul(const struct RfRoughPath *handle,
                            double lambda,
                            struct RfRoughPath **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROUGHFLOW_H */
