#ifndef RELHYP_H
#define RELHYP_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  RELHYP_STATUS_OK = 0,
  RELHYP_STATUS_NULL_ARGUMENT = 1,
  RELHYP_STATUS_INVALID_INPUT = 2,
  RELHYP_STATUS_PARSE = 3,
  RELHYP_STATUS_OUTSIDE_REGION = 4,
  RELHYP_STATUS_INFEASIBLE = 5,
  RELHYP_STATUS_TRUNCATION_UNSAFE = 6,
  RELHYP_STATUS_NOT_A_CYCLE = 7,
  RELHYP_STATUS_UNSUPPORTED = 8,
  RELHYP_STATUS_IO = 9,
  RELHYP_STATUS_INTERNAL = 10,
} RelhypStatus;

/**
 * A simplicial complex.
 */
typedef struct RelhypComplex RelhypComplex;

/**
 * A truncated cusped graph.
 */
typedef struct RelhypCusped RelhypCusped;

/**
 * A group with its peripheral subgroups.
 */
typedef struct RelhypPair RelhypPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *relhyp_last_error(void);

/**
 * Parses a pair description such as `group free 2\nperipheral 1: a\n`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
RelhypStatus relhyp_pair_parse(const char *text_ptr, RelhypPair **out);

/**
 * Number of peripheral subgroups.
 *
 * # Safety
 * `pair` must come from [`relhyp_pair_parse`].
 */
RelhypStatus relhyp_pair_index_count(const RelhypPair *pair, size_t *out);

/**
 * # Safety
 * `pair` must come from [`relhyp_pair_parse`] and not be used afterwards.
 */
void relhyp_pair_free(RelhypPair *pair);

/**
 * Builds the cusped graph over the ball of radius `r_base`; `h_max = 0`
 * selects the default depth.
 *
 * # Safety
 * `pair` must be a live handle and `out` a valid pointer.
 */
RelhypStatus relhyp_cusped_build(const RelhypPair *pair,
                                 size_t r_base,
                                 uint32_t h_max,
                                 RelhypCusped **out);

/**
 * # Safety
 * `x` must be a live handle; outputs must be valid pointers.
 */
RelhypStatus relhyp_cusped_size(const RelhypCusped *x, size_t *vertices, size_t *edges);

/**
 * Exact four-point δ of the whole truncation as `numerator/denominator`.
 *
 * # Safety
 * `x` must be a live handle; outputs must be valid pointers.
 */
RelhypStatus relhyp_cusped_delta(const RelhypCusped *x, int64_t *numerator, int64_t *denominator);

/**
 * # Safety
 * `x` must be a live handle and not be used afterwards.
 */
void relhyp_cusped_free(RelhypCusped *x);

/**
 * Rips complex of the cusped graph.
 *
 * # Safety
 * `x` must be a live handle and `out` a valid pointer.
 */
RelhypStatus relhyp_complex_rips(const RelhypCusped *x,
                                 uint32_t kappa,
                                 size_t d_max,
                                 RelhypComplex **out);

/**
 * Number of simplices of dimension `dim`.
 *
 * # Safety
 * `k` must be a live handle and `out` a valid pointer.
 */
RelhypStatus relhyp_complex_count(const RelhypComplex *k, size_t dim, size_t *out);

/**
 * Rank of (reduced) homology in degree `degree`.
 *
 * # Safety
 * `k` must be a live handle and `out` a valid pointer.
 */
RelhypStatus relhyp_complex_homology_rank(const RelhypComplex *k,
                                          size_t degree,
                                          bool reduced,
                                          size_t *out);

/**
 * Optimal filling of a cycle given as chain JSON
 * (`{"degree":1,"terms":[[[0,1],"1/1"],...]}`). On success `*out_json`
 * holds `{"value":"p/q","witness":{...}}`, to be released with
 * [`relhyp_string_free`].
 *
 * # Safety
 * `k` must be a live handle, `chain_json` a NUL-terminated string and
 * `out_json` a valid pointer.
 */
RelhypStatus relhyp_complex_fill(const RelhypComplex *k, const char *chain_json, char **out_json);

/**
 * # Safety
 * `k` must be a live handle and not be used afterwards.
 */
void relhyp_complex_free(RelhypComplex *k);

/**
 * Dimension of the relative cohomology `H^k(Γ, Γ′; ℝ)` of a finite pair.
 *
 * # Safety
 * `pair` must be a live handle and `out` a valid pointer.
 */
RelhypStatus relhyp_relative_cohomology_rank(const RelhypPair *pair, size_t degree, size_t *out);

/**
 * Runs the command-line front end in-process. `*out_report` receives the
 * report text (release with [`relhyp_string_free`]); the return value is
 * the CLI exit code.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; `out_report` must be a
 * valid pointer.
 */
int relhyp_run_cli(int argc, const char *const *argv, char **out_report);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void relhyp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELHYP_H */
