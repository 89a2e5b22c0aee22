/* C interface to the mtf-limit library. Generated by cbindgen; do not edit. */

#ifndef MTF_LIMIT_H
#define MTF_LIMIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a C-ABI call.
 */
typedef enum MtfStatus {
  MTF_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  MTF_STATUS_NULL_POINTER = 1,
  /**
   * A parameter violated its constraints.
   */
  MTF_STATUS_INVALID_ARGUMENT = 2,
  /**
   * An argument lay outside the mathematical domain of the operation.
   */
  MTF_STATUS_DOMAIN_ERROR = 3,
  /**
   * The input makes the requested quantity undefined.
   */
  MTF_STATUS_DEGENERATE_INPUT = 4,
  /**
   * The problem size exceeds a hard limit.
   */
  MTF_STATUS_SIZE_LIMIT = 5,
  /**
   * A numerical routine did not reach its tolerance.
   */
  MTF_STATUS_NON_CONVERGENCE = 6,
  /**
   * Malformed JSON or UTF-8 input.
   */
  MTF_STATUS_PARSE_ERROR = 7,
  MTF_STATUS_IO_ERROR = 8,
  /**
   * A panic was caught at the ABI boundary.
   */
  MTF_STATUS_INTERNAL_PANIC = 9,
} MtfStatus;

/**
 * How stationary search costs are drawn.
 */
typedef enum MtfSampleMethod {
  /**
   * Backward request replay until coverage; exact, coupon-collector cost.
   */
  MTF_SAMPLE_METHOD_CHAIN = 0,
  /**
   * Exponential-clock indicator sum; exact, linear cost per sample.
   */
  MTF_SAMPLE_METHOD_BERNOULLI = 1,
} MtfSampleMethod;

/**
 * Opaque weight-family handle.
 */
typedef struct MtfFamily MtfFamily;

/**
 * Opaque limit-law handle.
 */
typedef struct MtfLaw MtfLaw;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread, or NULL if none was recorded.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *mtf_last_error_message(void);

/**
 * Release a string returned through a `char **` output.
 */
void mtf_string_free(char *s);

/**
 * Unit point-mass weights (equally popular items).
 */
enum MtfStatus mtf_family_new_dirac(struct MtfFamily **out);

/**
 * Gamma weights with shape `alpha` and unit scale.
 */
enum MtfStatus mtf_family_new_gamma(double alpha, struct MtfFamily **out);

/**
 * Geometric weights on {0, 1, 2, ...} with success probability `p`.
 */
enum MtfStatus mtf_family_new_geometric(double p, struct MtfFamily **out);

/**
 * Poisson weights with rate `lambda`.
 */
enum MtfStatus mtf_family_new_poisson(double lambda, struct MtfFamily **out);

/**
 * Build a family from a JSON descriptor, `{"kind": "...", "params": {...}}`.
 */
enum MtfStatus mtf_family_from_json(const char *json, struct MtfFamily **out);

/**
 * Release a family handle. NULL is ignored.
 */
void mtf_family_free(struct MtfFamily *family);

/**
 * Mean weight and atom at zero.
 */
enum MtfStatus mtf_family_stats(const struct MtfFamily *family, double *mu, double *p0);

/**
 * Laplace transform of one weight, or its derivative: `order` 0 for phi,
 * 1 for phi', 2 for phi''.
 */
enum MtfStatus mtf_family_phi(const struct MtfFamily *family,
                              double r,
                              uint32_t order,
                              double *out);

/**
 * Solve `phi(r) = y` for `y` in `(p0, 1]`.
 */
enum MtfStatus mtf_family_phi_inverse(const struct MtfFamily *family, double y, double *out);

/**
 * Fill `out` (length `len`) with iid weights, reproducible from the seed.
 */
enum MtfStatus mtf_family_sample_weights(const struct MtfFamily *family,
                                         uint64_t seed,
                                         size_t len,
                                         double *out);

/**
 * Validate the family's transform invariants; writes a JSON report.
 */
enum MtfStatus mtf_family_validate_json(const struct MtfFamily *family,
                                        double tol,
                                        char **out_json);

/**
 * Limiting search-cost law for the family.
 */
enum MtfStatus mtf_law_new(const struct MtfFamily *family, struct MtfLaw **out);

/**
 * Release a law handle. NULL is ignored.
 */
void mtf_law_free(struct MtfLaw *law);

/**
 * Upper end of the support, `1 - p0`.
 */
enum MtfStatus mtf_law_support_end(const struct MtfLaw *law, double *out);

/**
 * Density of the limit law at `x` (zero outside the support).
 */
enum MtfStatus mtf_law_density(const struct MtfLaw *law, double x, double *out);

/**
 * CDF of the limit law at `x`.
 */
enum MtfStatus mtf_law_cdf(const struct MtfLaw *law, double x, double *out);

/**
 * Smallest `x` with `F(x) >= u`.
 */
enum MtfStatus mtf_law_quantile(const struct MtfLaw *law, double u, double *out);

/**
 * Moment `E[S^q]` for `q > -1`.
 */
enum MtfStatus mtf_law_moment(const struct MtfLaw *law, double q, double *out);

/**
 * Laplace transform `E[exp(-s S)]` for `s >= 0`.
 */
enum MtfStatus mtf_law_laplace(const struct MtfLaw *law, double s, double *out);

/**
 * Asymptotic LRU miss probability at cache fraction `alpha`.
 */
enum MtfStatus mtf_law_page_default(const struct MtfLaw *law, double alpha, double *out);

/**
 * Smallest cache fraction with miss probability at most `pi_target`.
 */
enum MtfStatus mtf_law_cache_size_for_target(const struct MtfLaw *law,
                                             double pi_target,
                                             double *out);

/**
 * Fill `alphas` and `pis` (both length `grid`) with the asymptotic miss
 * curve on a uniform grid over [0, 1].
 */
enum MtfStatus mtf_law_miss_curve(const struct MtfLaw *law,
                                  size_t grid,
                                  double *alphas,
                                  double *pis);

/**
 * Dominance report against the uniform law, as JSON.
 */
enum MtfStatus mtf_law_dominance_json(const struct MtfLaw *law,
                                      size_t grid,
                                      double tolerance,
                                      char **out_json);

/**
 * Draw `samples` stationary search costs for the request probabilities in
 * `probs` (length `n`, nonnegative, not all zero) into `out_costs`
 * (length `samples`). Bit-identical for a fixed seed.
 */
enum MtfStatus mtf_simulate_costs(const double *probs,
                                  size_t n,
                                  size_t samples,
                                  uint64_t seed,
                                  enum MtfSampleMethod method,
                                  uint32_t *out_costs);

/**
 * Exact stationary search-cost pmf (length `n`) by brute-force enumeration;
 * limited to `n <= 8`.
 */
enum MtfStatus mtf_stationary_pmf(const double *probs, size_t n, double *out_pmf);

/**
 * Laplace transform of the finite-n stationary search cost (n <= 64).
 */
enum MtfStatus mtf_laplace_sn(const struct MtfFamily *family, uint32_t n, double s, double *out);

/**
 * Kolmogorov-Smirnov distance between scaled costs (`costs/n`) and the
 * limit law's CDF.
 */
enum MtfStatus mtf_ks_statistic(const struct MtfLaw *law,
                                const uint32_t *costs,
                                size_t len,
                                size_t n,
                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MTF_LIMIT_H */
