#ifndef SPINCOORD_H
#define SPINCOORD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_NULL_POINTER = 1,
  SC_STATUS_DOMAIN = 2,
  SC_STATUS_POLE_PROXIMITY = 3,
  SC_STATUS_NON_FINITE = 4,
  SC_STATUS_INVALID_SPEC = 5,
  SC_STATUS_INVALID_ARGUMENT = 6,
  SC_STATUS_NOT_NORMALIZED = 7,
  SC_STATUS_NOT_BASIS_SPINOR = 8,
  SC_STATUS_BUFFER_TOO_SMALL = 9,
  SC_STATUS_PANIC = 10,
} ScStatus;

// Opaque spinor field handle.
typedef struct ScField ScField;

// Opaque two-electron state handle.
typedef struct ScState ScState;

typedef struct ScComplex {
  double re;
  double im;
} ScComplex;

// Coefficients over (alpha, beta).
typedef struct ScSpinor {
  struct ScComplex c_alpha;
  struct ScComplex c_beta;
} ScSpinor;

typedef struct ScLadderDefect {
  double norm_of_splus_beta;
  struct ScComplex overlap_with_alpha;
  double defect_norm;
} ScLadderDefect;

typedef struct ScCorrelationPoint {
  double angle;
  double e_oracle;
  double e_quadrature;
  double abs_diff;
} ScCorrelationPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len - 1` bytes) and returns the full message length.
//
// # Safety
// `buf` must be null or valid for `len` bytes of writes.
uintptr_t sc_last_error_message(char *buf, uintptr_t len);

// Evaluates alpha (`harmonic = 0`) or beta (`harmonic = 1`) at `(theta, phi)`.
//
// # Safety
// `out` must be valid for writes.
enum ScStatus sc_harmonic_eval(int32_t harmonic,
                               int32_t cover,
                               double theta,
                               double phi,
                               struct ScComplex *out);

// `|Y(theta, phi)|^2`.
//
// # Safety
// `out` must be valid for writes.
enum ScStatus sc_harmonic_density(int32_t harmonic,
                                  int32_t cover,
                                  double theta,
                                  double phi,
                                  double *out);

// New field for alpha or beta with analytic partials. Null on bad arguments.
struct ScField *sc_field_harmonic(int32_t harmonic, int32_t cover);

// `c_alpha * alpha + c_beta * beta` as a field. Null on bad arguments.
struct ScField *sc_field_from_spinor(struct ScSpinor spinor, int32_t cover);

// `c1 * f1 + c2 * f2`. Null if either handle is null.
//
// # Safety
// `f1`, `f2` must be null or live field handles.
struct ScField *sc_field_combine(struct ScComplex c1,
                                 const struct ScField *f1,
                                 struct ScComplex c2,
                                 const struct ScField *f2);

// Releases a field handle. Null is ignored.
//
// # Safety
// `f` must be null or a handle not yet freed.
void sc_field_free(struct ScField *f);

// # Safety
// `f` must be a live handle and `out` valid for writes.
enum ScStatus sc_field_eval(const struct ScField *f,
                            double theta,
                            double phi,
                            struct ScComplex *out);

// Applies an operator at a point: `op` is 0 = S^2, 1 = S_z, 2 = S_+, 3 = S_-.
// `fd_step <= 0` selects analytic partials (with the default step for any
// missing ones); a positive `fd_step` forces central differences.
//
// # Safety
// `f` must be a live handle and `out` valid for writes.
enum ScStatus sc_apply_operator(int32_t op,
                                const struct ScField *f,
                                double theta,
                                double phi,
                                double fd_step,
                                struct ScComplex *out);

// `<f|g>` with the `sin theta` measure.
//
// # Safety
// `f`, `g` must be live handles and `out` valid for writes.
enum ScStatus sc_full_inner_product(const struct ScField *f,
                                    const struct ScField *g,
                                    uint32_t n_theta,
                                    uint32_t n_phi,
                                    int32_t cover,
                                    struct ScComplex *out);

// `integral of f* g dphi` at fixed theta.
//
// # Safety
// `f`, `g` must be live handles and `out` valid for writes.
enum ScStatus sc_phi_inner_product(const struct ScField *f,
                                   const struct ScField *g,
                                   double theta,
                                   uint32_t n_phi,
                                   int32_t cover,
                                   struct ScComplex *out);

// Coordinates `(<alpha|f>, <beta|f>)`.
//
// # Safety
// `f` must be a live handle and `out` valid for writes.
enum ScStatus sc_project_to_spinor(const struct ScField *f,
                                   uint32_t n_theta,
                                   uint32_t n_phi,
                                   int32_t cover,
                                   struct ScSpinor *out);

// Spin state polarized along `(theta, phi)`, `phi` in `[0, 2 pi)`.
//
// # Safety
// `out` must be valid for writes.
enum ScStatus sc_bloch_state(double theta, double phi, struct ScSpinor *out);

// # Safety
// `out` must be valid for writes.
enum ScStatus sc_ladder_defect(uint32_t n_theta,
                               uint32_t n_phi,
                               int32_t cover,
                               struct ScLadderDefect *out);

// New singlet state handle.
struct ScState *sc_state_singlet(void);

// Product of two normalized spinors. Null if either is not normalized.
struct ScState *sc_state_product(struct ScSpinor s1, struct ScSpinor s2);

// Releases a state handle. Null is ignored.
//
// # Safety
// `s` must be null or a handle not yet freed.
void sc_state_free(struct ScState *s);

// `E(a, b)`; `channel` 0 = 4x4 matrix oracle, 1 = four-angle quadrature.
//
// # Safety
// `s` must be a live handle and `out` valid for writes.
enum ScStatus sc_epr_correlation(const struct ScState *s,
                                 double a_theta,
                                 double a_phi,
                                 double b_theta,
                                 double b_phi,
                                 int32_t channel,
                                 uint32_t n_theta,
                                 uint32_t n_phi,
                                 int32_t cover,
                                 double *out);

// Fills `out[0..n_points]` with the detector sweep. `capacity` must be at
// least `n_points`.
//
// # Safety
// `s` must be a live handle and `out` valid for `capacity` writes.
enum ScStatus sc_correlation_curve(const struct ScState *s,
                                   uint32_t n_points,
                                   uint32_t n_theta,
                                   uint32_t n_phi,
                                   int32_t cover,
                                   struct ScCorrelationPoint *out,
                                   uintptr_t capacity);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SPINCOORD_H */
