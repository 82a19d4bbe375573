#ifndef LOEWNER_PENCIL_H
#define LOEWNER_PENCIL_H

/* Generated by cbindgen from the loewner-pencil-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which matrix of the quadruple to copy out.
 */
typedef enum {
  LP_MATRIX_KIND_W = 0,
  LP_MATRIX_KIND_L = 1,
  LP_MATRIX_KIND_LS = 2,
  LP_MATRIX_KIND_V = 3,
} LpMatrixKind;

/**
 * Status code returned by every API function.
 */
typedef enum {
  LP_STATUS_OK = 0,
  LP_STATUS_NULL_POINTER = 1,
  LP_STATUS_INVALID_ARGUMENT = 2,
  LP_STATUS_DIMENSION_MISMATCH = 3,
  LP_STATUS_SINGULAR = 4,
  LP_STATUS_NO_CONVERGENCE = 5,
  LP_STATUS_NUMERICAL_FAILURE = 6,
} LpStatus;

/**
 * Opaque pseudospectra grid.
 */
typedef struct LpGrid LpGrid;

/**
 * Opaque Loewner quadruple.
 */
typedef struct LpQuadruple LpQuadruple;

/**
 * Opaque SISO pole-residue system.
 */
typedef struct LpSystem LpSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread. The pointer stays
 * valid until the next failing call on the same thread; never free it.
 */
const char *lp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lp_version(void);

/**
 * Creates a SISO pole-residue system from `n` poles and residues.
 *
 * # Safety
 * `poles_re`, `poles_im`, `residues_re`, `residues_im` must point to `n`
 * readable doubles each; `out` must be a valid writable pointer. The
 * returned handle is released with [`lp_system_free`].
 */
LpStatus lp_system_pole_residue_new(uintptr_t n,
                                    const double *poles_re,
                                    const double *poles_im,
                                    const double *residues_re,
                                    const double *residues_im,
                                    LpSystem **out);

/**
 * # Safety
 * `handle` must be null or a pointer returned by
 * [`lp_system_pole_residue_new`], not yet freed.
 */
void lp_system_free(LpSystem *handle);

/**
 * Number of poles; 0 for a null handle.
 *
 * # Safety
 * `handle` must be null or a live system handle.
 */
uintptr_t lp_system_order(const LpSystem *handle);

/**
 * Evaluates the transfer function at `s`.
 *
 * # Safety
 * `handle` must be a live system handle; `out_re`, `out_im` writable.
 */
LpStatus lp_system_transfer_eval(const LpSystem *handle,
                                 double s_re,
                                 double s_im,
                                 double *out_re,
                                 double *out_im);

/**
 * Samples the system at distinct left/right points and builds the
 * Loewner quadruple.
 *
 * # Safety
 * Point arrays must hold `q` (respectively `k`) readable doubles; `out`
 * must be writable. Release the handle with [`lp_quadruple_free`].
 */
LpStatus lp_quadruple_build(const LpSystem *system,
                            uintptr_t q,
                            const double *mu_re,
                            const double *mu_im,
                            uintptr_t k,
                            const double *lambda_re,
                            const double *lambda_im,
                            LpQuadruple **out);

/**
 * Same-point (Hermite) quadruple: values and derivatives at `mu`.
 *
 * # Safety
 * As [`lp_quadruple_build`], with `q` points.
 */
LpStatus lp_quadruple_build_hermite(const LpSystem *system,
                                    uintptr_t q,
                                    const double *mu_re,
                                    const double *mu_im,
                                    LpQuadruple **out);

/**
 * # Safety
 * `handle` must be null or a live quadruple handle, not yet freed.
 */
void lp_quadruple_free(LpQuadruple *handle);

/**
 * Dimensions of one quadruple matrix.
 *
 * # Safety
 * `handle` live; `rows`, `cols` writable.
 */
LpStatus lp_quadruple_matrix_dims(const LpQuadruple *handle,
                                  LpMatrixKind which,
                                  uintptr_t *rows,
                                  uintptr_t *cols);

/**
 * Copies one quadruple matrix out, row major.
 *
 * # Safety
 * `out_re`, `out_im` must hold rows*cols writable doubles (query the
 * dims with [`lp_quadruple_matrix_dims`]).
 */
LpStatus lp_quadruple_matrix(const LpQuadruple *handle,
                             LpMatrixKind which,
                             double *out_re,
                             double *out_im);

/**
 * Eigenvalues of the pencil (Ls, L): the model poles. Needs a square
 * quadruple with invertible L; writes rows(L) values.
 *
 * # Safety
 * `out_re`, `out_im` must hold rows(L) writable doubles.
 */
LpStatus lp_quadruple_pencil_eigenvalues(const LpQuadruple *handle, double *out_re, double *out_im);

/**
 * Evaluates the recovered transfer function `W (Ls - sL)^+ V` at `s`
 * (SISO quadruple: scalar out).
 *
 * # Safety
 * `handle` live; `out_re`, `out_im` writable.
 */
LpStatus lp_quadruple_recover_transfer(const LpQuadruple *handle,
                                       double s_re,
                                       double s_im,
                                       double *out_re,
                                       double *out_im);

/**
 * Unstructured sensitivity rho and its per-pole bound for the pencil
 * sampled at the given points; writes order(system) doubles into each
 * non-null output.
 *
 * # Safety
 * Arrays per [`lp_quadruple_build`]; `out_rho`, `out_bound` must each be
 * null or hold order(system) writable doubles.
 */
LpStatus lp_sensitivity_rho(const LpSystem *system,
                            uintptr_t q,
                            const double *mu_re,
                            const double *mu_im,
                            uintptr_t k,
                            const double *lambda_re,
                            const double *lambda_im,
                            double *out_rho,
                            double *out_bound);

/**
 * Structured sensitivity eta per pole for distinct points; writes
 * order(system) doubles.
 *
 * # Safety
 * Arrays per [`lp_sensitivity_rho`]; `out_eta` writable.
 */
LpStatus lp_sensitivity_eta(const LpSystem *system,
                            uintptr_t q,
                            const double *mu_re,
                            const double *mu_im,
                            uintptr_t k,
                            const double *lambda_re,
                            const double *lambda_im,
                            double *out_eta);

/**
 * Same-point (value + derivative) structured sensitivity eta.
 *
 * # Safety
 * As [`lp_sensitivity_eta`] with `q` points.
 */
LpStatus lp_sensitivity_eta_hermite(const LpSystem *system,
                                    uintptr_t q,
                                    const double *mu_re,
                                    const double *mu_im,
                                    double *out_eta);

/**
 * Hankel singular values via the mirrored-point Loewner matrix; writes
 * order(system) doubles, sorted non-increasing.
 *
 * # Safety
 * `out` must hold order(system) writable doubles.
 */
LpStatus lp_hankel_singular_values(const LpSystem *system, double *out);

/**
 * Samples the pseudospectra surface of the quadruple's pencil on an
 * nx-by-ny grid. Pass `nu <= 0` or `delta <= 0` to use the defaults
 * `||L||_2` and `||Ls||_2`.
 *
 * # Safety
 * `quadruple` live; `out` writable. Release with [`lp_grid_free`].
 */
LpStatus lp_pseudospectra_grid_new(const LpQuadruple *quadruple,
                                   double re_min,
                                   double re_max,
                                   double im_min,
                                   double im_max,
                                   uintptr_t nx,
                                   uintptr_t ny,
                                   double nu,
                                   double delta,
                                   LpGrid **out);

/**
 * # Safety
 * `handle` must be null or a live grid handle, not yet freed.
 */
void lp_grid_free(LpGrid *handle);

/**
 * Copies the ny-by-nx epsilon surface out, row major over iy then ix.
 *
 * # Safety
 * `out` must hold nx*ny writable doubles.
 */
LpStatus lp_grid_values(const LpGrid *handle, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LOEWNER_PENCIL_H */
