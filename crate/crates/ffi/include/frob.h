/* C interface to the frob l-numerical-semigroup library. */

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
enum FrobStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  FROB_STATUS_OK = 0,
  FROB_STATUS_NULL_POINTER = 1,
  FROB_STATUS_NOT_COPRIME = 2,
  FROB_STATUS_BAD_RANGE = 3,
  FROB_STATUS_OVERFLOW = 4,
  FROB_STATUS_ORACLE_RANGE_EXCEEDED = 5,
  FROB_STATUS_ENUMERATION_TOO_LARGE = 6,
  FROB_STATUS_NOT_REPRESENTABLE = 7,
  FROB_STATUS_INVALID_RANGE = 8,
  FROB_STATUS_RANGE_TOO_LARGE = 9,
  FROB_STATUS_OUT_OF_TABLE_RANGE = 10,
  FROB_STATUS_TABLE_COVERAGE = 11,
  FROB_STATUS_BAD_T = 12,
  FROB_STATUS_Q_TOO_LARGE = 13,
  FROB_STATUS_GRID_TOO_COARSE = 14,
  FROB_STATUS_GRID_TOO_LARGE = 15,
  FROB_STATUS_BUDGET_EXCEEDED = 16,
  FROB_STATUS_INTERNAL = 17,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum FrobStatus FrobStatus;
#else
typedef int32_t FrobStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Quadrature mode for the arc decomposition.
 */
enum FrobArcMode
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  FROB_ARC_MODE_EXACT_GRID = 0,
  FROB_ARC_MODE_SAMPLED = 1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum FrobArcMode FrobArcMode;
#else
typedef int32_t FrobArcMode;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque handle wrapping validated (c, d, ell) parameters.
 */
typedef struct FrobParams FrobParams;

/**
 * Counting report for one (c, d, ell); mirrors the CSV columns.
 */
typedef struct FrobCountReport {
  uint64_t c;
  uint64_t d;
  uint64_t ell;
  uint64_t g_ell;
  uint64_t pi_ell;
  uint64_t pi_of_g;
  double psi_ell;
  double theta_ell;
  double ratio;
  double half_g;
  double psi_over_half_g;
  double pi_reconstructed;
} FrobCountReport;

/**
 * Major/minor arc decomposition result plus the sampled minor-arc sup.
 */
typedef struct FrobArcReport {
  uint64_t q;
  uint64_t grid_points;
  double major_re;
  double major_im;
  double minor_re;
  double minor_im;
  double total_exact;
  double half_g;
  double error_estimate;
  double minor_sup_estimate;
} FrobArcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Validate (c, d, ell) and allocate a parameter handle into `out`.
 * Free it with `frob_params_free`.
 *
 * # Safety
 * `out` must be a valid pointer to writable memory.
 */
FrobStatus frob_params_new(uint64_t c, uint64_t d, uint64_t ell, struct FrobParams **out);

/**
 * Release a handle from `frob_params_new`. A null pointer is a no-op.
 *
 * # Safety
 * `params` must be a pointer previously returned by `frob_params_new` and
 * not freed since.
 */
void frob_params_free(struct FrobParams *params);

/**
 * The l-Frobenius number (l+1)cd - c - d of the handle.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
FrobStatus frob_params_g_ell(const struct FrobParams *params, uint64_t *out);

/**
 * Number of representations n = c*x + d*y over non-negative integers.
 *
 * # Safety
 * `out` must be writable.
 */
FrobStatus frob_rep_count(uint64_t c, uint64_t d, uint64_t n, uint64_t *out);

/**
 * Whether n lies in the l-numerical semigroup (more than ell
 * representations).
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
FrobStatus frob_is_member(const struct FrobParams *params, uint64_t n, bool *out);

/**
 * Allocate the sorted gap list of the handle into `out_ptr`/`out_len`.
 * Free it with `frob_u64_buffer_free`.
 *
 * # Safety
 * `params` must be a live handle; `out_ptr` and `out_len` must be writable.
 */
FrobStatus frob_gaps(const struct FrobParams *params, uint64_t **out_ptr, size_t *out_len);

/**
 * Release a buffer from `frob_gaps`. A null pointer is a no-op.
 *
 * # Safety
 * `(ptr, len)` must come from `frob_gaps` and not be freed since.
 */
void frob_u64_buffer_free(uint64_t *ptr, size_t len);

/**
 * Full counting report for (c, d, ell): sieves up to g_ell internally.
 *
 * # Safety
 * `out` must be writable.
 */
FrobStatus frob_count_report(uint64_t c, uint64_t d, uint64_t ell, struct FrobCountReport *out);

/**
 * Major/minor arc decomposition plus the sampled sup of |f| on the minor
 * arcs.
 *
 * # Safety
 * `out` must be writable.
 */
FrobStatus frob_arc_report(uint64_t c,
                           uint64_t d,
                           uint64_t ell,
                           uint64_t q,
                           uint64_t grid_points,
                           FrobArcMode mode,
                           uint64_t samples,
                           uint64_t seed,
                           struct FrobArcReport *out);

/**
 * Static name of a status code (never null).
 */
const char *frob_status_name(FrobStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
