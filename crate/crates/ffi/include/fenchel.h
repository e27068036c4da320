#ifndef FENCHEL_H
#define FENCHEL_H

/* Generated by cbindgen from the fenchel-ffi crate; edit src/lib.rs instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of a fallible call. `FENCHEL_STATUS_OK` is zero; everything
 * else is a failure and leaves a message in `fenchel_last_error`.
 */
typedef enum FenchelStatus {
  /**
   * The call succeeded.
   */
  FENCHEL_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  FENCHEL_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  FENCHEL_STATUS_INVALID_UTF8 = 2,
  /**
   * Operand shapes do not fit together.
   */
  FENCHEL_STATUS_DIMENSION_MISMATCH = 3,
  /**
   * A quadratic form violated the convexity its polarity requires.
   */
  FENCHEL_STATUS_NOT_CONVEX = 4,
  /**
   * The result would be -inf (or +inf on the concave side) everywhere.
   */
  FENCHEL_STATUS_UNBOUNDED = 5,
  /**
   * Malformed input: unreadable JSON, non-finite entries, stray values.
   */
  FENCHEL_STATUS_IMPROPER_INPUT = 6,
  /**
   * Convex and concave operands were mixed where one family is required.
   */
  FENCHEL_STATUS_POLARITY_MISMATCH = 7,
  /**
   * The observed value lies outside the support of the joint state.
   */
  FENCHEL_STATUS_INFEASIBLE_OBSERVATION = 8,
  /**
   * The library caught an internal panic; the operation had no effect.
   */
  FENCHEL_STATUS_PANIC = 9,
} FenchelStatus;

/**
 * Orientation of a bifunction: convex functions compose with infima,
 * concave ones with suprema.
 */
typedef enum FenchelPolarity {
  FENCHEL_POLARITY_CONVEX = 0,
  FENCHEL_POLARITY_CONCAVE = 1,
} FenchelPolarity;

/**
 * A convex or concave quadratic bifunction between R^m and R^n. Opaque.
 */
typedef struct FenchelBifunction FenchelBifunction;

/**
 * An affine-Gaussian map (A, mu, Sigma). Opaque.
 */
typedef struct FenchelGaussMap FenchelGaussMap;

/**
 * A partial convex quadratic function on R^n. Opaque.
 */
typedef struct FenchelPcqf FenchelPcqf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library, as a static NUL-terminated string. Never freed.
 */
const char *fenchel_version(void);

/**
 * Message of the most recent failure on the calling thread, as a
 * NUL-terminated string. Valid until the next failing call on the same
 * thread; never freed by the caller. Empty if nothing failed yet.
 */
const char *fenchel_last_error(void);

/**
 * The rank tolerance used when a `tol` argument is non-positive.
 */
double fenchel_default_tolerance(void);

/**
 * The comparison tolerance the library itself uses for equality checks.
 */
double fenchel_equality_tolerance(void);

/**
 * Releases a string obtained from a `char **` out-parameter. Null is a
 * no-op.
 *
 * # Safety
 * `s` must have come from this library and not have been freed before.
 */
void fenchel_string_free(char *s);

/**
 * Reads a function from its JSON serialization.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_from_json(const char *json, struct FenchelPcqf **out);

/**
 * Writes the JSON serialization of `f`; release with `fenchel_string_free`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_to_json(const struct FenchelPcqf *f, char **out);

/**
 * Duplicates a handle; the copy is released independently.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_clone(const struct FenchelPcqf *f, struct FenchelPcqf **out);

/**
 * Releases a function handle. Null is a no-op.
 *
 * # Safety
 * `f` must have come from this library and not have been freed before.
 */
void fenchel_pcqf_free(struct FenchelPcqf *f);

/**
 * Ambient dimension of the function's domain space.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_dim(const struct FenchelPcqf *f, size_t *out);

/**
 * Evaluates `f` at the point `x` of length `len`. Points outside the
 * effective domain give `HUGE_VAL`.
 *
 * # Safety
 * `x` must point to `len` doubles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_evaluate(const struct FenchelPcqf *f,
                                         const double *x,
                                         size_t len,
                                         double *out);

/**
 * Infimum of `f` over its whole domain: finite, `-HUGE_VAL` when the
 * function is unbounded below, `HUGE_VAL` when the domain is empty.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_infimum(const struct FenchelPcqf *f, double *out);

/**
 * Convex conjugate of `f`. `tol` is the rank cutoff for the curvature
 * pseudoinverse and the domain split; pass a non-positive value for the
 * default.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_conjugate(const struct FenchelPcqf *f,
                                          double tol,
                                          struct FenchelPcqf **out);

/**
 * Pointwise sum `f + g` (domains intersect).
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_add(const struct FenchelPcqf *f,
                                    const struct FenchelPcqf *g,
                                    struct FenchelPcqf **out);

/**
 * Infimal convolution `(f ☐ g)(x) = inf_y f(y) + g(x - y)`.
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_inf_convolution(const struct FenchelPcqf *f,
                                                const struct FenchelPcqf *g,
                                                struct FenchelPcqf **out);

/**
 * Infimizes out all coordinates after the first `keep`, producing a
 * function on R^keep. Fails with `FENCHEL_STATUS_UNBOUNDED` when the
 * infimum diverges.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_partial_infimum(const struct FenchelPcqf *f,
                                                size_t keep,
                                                struct FenchelPcqf **out);

/**
 * Whether `f` and `g` agree as functions within `tol`, comparing both the
 * coefficients and the domains.
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_pcqf_equal_within(const struct FenchelPcqf *f,
                                             const struct FenchelPcqf *g,
                                             double tol,
                                             bool *out);

/**
 * Reads a bifunction from its JSON serialization.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_from_json(const char *json, struct FenchelBifunction **out);

/**
 * Writes the JSON serialization of `f`; release with `fenchel_string_free`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_to_json(const struct FenchelBifunction *f, char **out);

/**
 * Duplicates a handle; the copy is released independently.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_clone(const struct FenchelBifunction *f,
                                            struct FenchelBifunction **out);

/**
 * Releases a bifunction handle. Null is a no-op.
 *
 * # Safety
 * `f` must have come from this library and not have been freed before.
 */
void fenchel_bifunction_free(struct FenchelBifunction *f);

/**
 * Dimension of the source space.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_src_dim(const struct FenchelBifunction *f, size_t *out);

/**
 * Dimension of the target space.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_dst_dim(const struct FenchelBifunction *f, size_t *out);

/**
 * Whether the bifunction is convex or concave.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_polarity(const struct FenchelBifunction *f,
                                               enum FenchelPolarity *out);

/**
 * The identity bifunction on R^n (convex).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_identity(size_t n, struct FenchelBifunction **out);

/**
 * The convex indicator bifunction of the linear map `a` (`rows` x `cols`,
 * row-major): zero on the graph of the map, +inf elsewhere.
 *
 * # Safety
 * `a` must point to `rows * cols` doubles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_from_linear_map(const double *a,
                                                      size_t rows,
                                                      size_t cols,
                                                      struct FenchelBifunction **out);

/**
 * Wraps a function as a state: a bifunction from R^0 into the function's
 * space, with the requested polarity.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_from_pcqf_state(const struct FenchelPcqf *f,
                                                      enum FenchelPolarity polarity,
                                                      struct FenchelBifunction **out);

/**
 * Wraps a function as an effect: a bifunction from the function's space
 * into R^0, with the requested polarity.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_from_pcqf_effect(const struct FenchelPcqf *f,
                                                       enum FenchelPolarity polarity,
                                                       struct FenchelBifunction **out);

/**
 * Sequential composite `f ∘ g`: the pipeline that applies `g` first.
 * Convex pairs compose with an infimum over the middle variable, concave
 * pairs with a supremum; mixing polarities fails.
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_compose(const struct FenchelBifunction *f,
                                              const struct FenchelBifunction *g,
                                              struct FenchelBifunction **out);

/**
 * Parallel composite `f ⊗ g` on the concatenated spaces.
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_tensor(const struct FenchelBifunction *f,
                                             const struct FenchelBifunction *g,
                                             struct FenchelBifunction **out);

/**
 * Reverses the direction of `f` without changing its values.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_dagger(const struct FenchelBifunction *f,
                                             struct FenchelBifunction **out);

/**
 * Reverses the direction and negates the values, flipping the polarity.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_inverse(const struct FenchelBifunction *f,
                                              struct FenchelBifunction **out);

/**
 * Conjugates both arguments: the contravariant dual with the opposite
 * polarity.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_adjoint(const struct FenchelBifunction *f,
                                              struct FenchelBifunction **out);

/**
 * Negates the values pointwise, flipping the polarity but not the
 * direction.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_negated(const struct FenchelBifunction *f,
                                              struct FenchelBifunction **out);

/**
 * Evaluates `f` at an input/output pair. Values outside the effective
 * domain give `HUGE_VAL` (convex) or `-HUGE_VAL` (concave).
 *
 * # Safety
 * `input` and `output` must point to `in_len` and `out_len` doubles;
 * `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_evaluate(const struct FenchelBifunction *f,
                                               const double *input,
                                               size_t in_len,
                                               const double *output,
                                               size_t out_len,
                                               double *out);

/**
 * Value of a closed diagram: a bifunction from R^0 to R^0 is a single
 * extended real.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_scalar_value(const struct FenchelBifunction *f, double *out);

/**
 * Whether `f` and `g` agree within `tol`: same direction, same polarity,
 * and equal graphs.
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_equal_within(const struct FenchelBifunction *f,
                                                   const struct FenchelBifunction *g,
                                                   double tol,
                                                   bool *out);

/**
 * Whether discarding the output of `f` leaves the pointwise unit. Pass a
 * non-positive `tol` for the library's comparison tolerance.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_is_discardable(const struct FenchelBifunction *f,
                                                     double tol,
                                                     bool *out);

/**
 * Whether discarding the output of `f` leaves the additive unit. Pass a
 * non-positive `tol` for the library's comparison tolerance.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_bifunction_is_co_discardable(const struct FenchelBifunction *f,
                                                        double tol,
                                                        bool *out);

/**
 * Reads a Gaussian map from its JSON serialization.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_from_json(const char *json, struct FenchelGaussMap **out);

/**
 * Writes the JSON serialization of `f`; release with `fenchel_string_free`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_to_json(const struct FenchelGaussMap *f, char **out);

/**
 * Duplicates a handle; the copy is released independently.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_clone(const struct FenchelGaussMap *f,
                                       struct FenchelGaussMap **out);

/**
 * Releases a Gaussian map handle. Null is a no-op.
 *
 * # Safety
 * `f` must have come from this library and not have been freed before.
 */
void fenchel_gauss_free(struct FenchelGaussMap *f);

/**
 * Builds the map `x ↦ N(a x + mu, sigma)` from raw parts: `a` is
 * `dst` x `src` row-major, `mu` has length `dst`, and `sigma` is
 * `dst` x `dst` row-major, symmetric positive semidefinite.
 *
 * # Safety
 * The arrays must have the stated lengths; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_from_parts(size_t dst,
                                            size_t src,
                                            const double *a,
                                            const double *mu,
                                            const double *sigma,
                                            struct FenchelGaussMap **out);

/**
 * Dimension of the source space.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_src_dim(const struct FenchelGaussMap *f, size_t *out);

/**
 * Dimension of the target space.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_dst_dim(const struct FenchelGaussMap *f, size_t *out);

/**
 * Sequential composite `f ∘ g`: the pipeline that applies `g` first.
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_compose(const struct FenchelGaussMap *f,
                                         const struct FenchelGaussMap *g,
                                         struct FenchelGaussMap **out);

/**
 * Parallel composite `f ⊗ g` on the concatenated spaces.
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_tensor(const struct FenchelGaussMap *f,
                                        const struct FenchelGaussMap *g,
                                        struct FenchelGaussMap **out);

/**
 * Cumulant-generating-function image of `f`: a convex bifunction between
 * the same spaces.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_cgf(const struct FenchelGaussMap *f,
                                     struct FenchelBifunction **out);

/**
 * Log-density image of `f`: a concave bifunction in the opposite
 * direction.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_gauss_logpdf(const struct FenchelGaussMap *f,
                                        struct FenchelBifunction **out);

/**
 * Conditions a joint log-density state on an observed suffix. `joint`
 * must be a concave state (source dimension zero) on R^n; `value` has
 * length m < n and fixes the last m coordinates. The result is the
 * conditional log-density state on the first n - m coordinates, exact up
 * to the normalizing constant.
 *
 * # Safety
 * `joint` must be a live handle; `value` must point to `len` doubles;
 * `out` must be a valid pointer.
 */
enum FenchelStatus fenchel_condition_logpdf(const struct FenchelBifunction *joint,
                                            const double *value,
                                            size_t len,
                                            struct FenchelBifunction **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FENCHEL_H */
