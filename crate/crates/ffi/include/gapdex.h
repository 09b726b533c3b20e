#ifndef GAPDEX_H
#define GAPDEX_H

/* Generated by cbindgen from crates/ffi/src. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum GapdexStatus {
  GAPDEX_STATUS_OK = 0,
  GAPDEX_STATUS_NULL_POINTER = 1,
  GAPDEX_STATUS_DOMAIN = 2,
  GAPDEX_STATUS_SIZE = 3,
  GAPDEX_STATUS_DATA = 4,
  GAPDEX_STATUS_INDEX = 5,
  GAPDEX_STATUS_DEGENERATE = 6,
  GAPDEX_STATUS_TOO_MANY_EXCLUSIONS = 7,
  GAPDEX_STATUS_USAGE = 8,
  GAPDEX_STATUS_IO = 9,
  GAPDEX_STATUS_BUFFER_TOO_SMALL = 10,
  GAPDEX_STATUS_PANIC = 99,
} GapdexStatus;

/**
 * Opaque sample handle.
 */
typedef struct GapdexSample GapdexSample;

/**
 * Moments of a standard normal truncated below at `threshold`.
 */
typedef struct GapdexTruncatedMoments {
  double mean;
  double variance;
  double skewness;
} GapdexTruncatedMoments;

/**
 * Strongest two-cluster split. Cluster 1 holds order statistics
 * `1..=j`, cluster 2 holds `j+1..=n` (1-based).
 */
typedef struct GapdexSplit {
  size_t j;
  double statistic;
  double separator_low;
  double separator_high;
} GapdexSplit;

typedef struct GapdexGumbelTest {
  /**
   * Centered statistic n·Ĩ − ln n.
   */
  double x;
  double p_value;
} GapdexGumbelTest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or null. The
 * pointer stays valid until the next library call on the same thread.
 */
const char *gapdex_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gapdex_version(void);

/**
 * Standard normal density.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_normal_pdf(double x, double *out);

/**
 * Standard normal CDF.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_normal_cdf(double x, double *out);

/**
 * Upper tail 1 − Φ(z), accurate far into the tail.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_normal_upper_tail(double x, double *out);

/**
 * Inverse of the standard normal CDF on (0, 1).
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_normal_quantile(double x, double *out);

/**
 * Mills ratio φ(z)/(1 − Φ(z)).
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_mills_ratio(double x, double *out);

/**
 * Standard Gumbel CDF.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_gumbel_cdf(double x, double *out);

/**
 * Limit law exp(−e^{−x}/2) of one half of the sample.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_half_limit_cdf(double x, double *out);

/**
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_truncated_moments(double threshold, struct GapdexTruncatedMoments *out);

/**
 * Copies `len` values into a new sample handle.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be valid for
 * one write. Release the handle with `gapdex_sample_free`.
 */
enum GapdexStatus gapdex_sample_new(const double *values, size_t len, struct GapdexSample **out);

/**
 * Releases a sample handle. Null is ignored.
 *
 * # Safety
 * `sample` must be null or a handle from `gapdex_sample_new` not yet freed.
 */
void gapdex_sample_free(struct GapdexSample *sample);

/**
 * Number of observations, or 0 for a null handle.
 *
 * # Safety
 * `sample` must be null or a live handle.
 */
size_t gapdex_sample_len(const struct GapdexSample *sample);

/**
 * Writes the `n − 1` spacings into `buf`. `written` receives the count
 * required; if `cap` is smaller nothing is copied and
 * `GAPDEX_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `buf` must be valid for `cap` writes; `written` must be valid for one.
 */
enum GapdexStatus gapdex_sample_spacings(const struct GapdexSample *sample,
                                         double *buf,
                                         size_t cap,
                                         size_t *written);

/**
 * # Safety
 * `sample` must be a live handle; `out` valid for one write.
 */
enum GapdexStatus gapdex_sample_cluster_split(const struct GapdexSample *sample,
                                              struct GapdexSplit *out);

/**
 * Asymptotic Gumbel p-value of cluster index `statistic` at size `n`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_cluster_test(size_t n, double statistic, struct GapdexGumbelTest *out);

/**
 * Fills `buf` with the first `len` standard normals of substream
 * `(seed, index)`: exactly the variates replicate `index` of a simulation
 * seeded with `seed` consumes.
 *
 * # Safety
 * `buf` must be valid for `len` writes.
 */
enum GapdexStatus gapdex_substream_normals(uint64_t seed, uint64_t index, double *buf, size_t len);

/**
 * Runs the null simulation of n·Ĩ − ln n (or, with `half`, of the
 * positive-side statistic) on the default grid and returns the report as
 * JSON. Free the string with `gapdex_string_free`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GapdexStatus gapdex_simulate_json(size_t n, size_t reps, uint64_t seed, bool half, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void gapdex_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAPDEX_H */
