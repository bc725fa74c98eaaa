#ifndef POLARITON_SN_H
#define POLARITON_SN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SnStatus {
  SN_STATUS_OK = 0,
  SN_STATUS_NULL_POINTER = 1,
  SN_STATUS_INVALID_ARGUMENT = 2,
  SN_STATUS_NO_PHASE_MATCHING = 3,
  SN_STATUS_DEGENERATE_POTENTIALS = 4,
  SN_STATUS_CAPACITY_EXCEEDED = 5,
  SN_STATUS_INVALID_STATE = 6,
  SN_STATUS_BUFFER_TOO_SMALL = 7,
  SN_STATUS_PANIC = 99,
} SnStatus;

/**
 * Cavity parameters.
 */
typedef struct SnCavity SnCavity;

/**
 * Outcome of a Schmidt-number test.
 */
typedef struct SnCertificate SnCertificate;

/**
 * Arrival-time averaged two-photon density matrix.
 */
typedef struct SnState SnState;

/**
 * Hopfield coefficients; `m12 >= 0` and `m21 = -m12`.
 */
typedef struct SnHopfield {
  double m11;
  double m12;
  double m21;
  double m22;
} SnHopfield;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sn_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * NUL-terminated when `len > 0`). Returns the full message length
 * excluding the terminator, or 0 when no error is recorded.
 *
 * # Safety
 * `buf` must be valid for `len` bytes or be NULL with `len == 0`.
 */
size_t sn_last_error_message(char *buf, size_t len);

/**
 * Clears the calling thread's last error message.
 */
void sn_clear_last_error(void);

/**
 * Creates cavity parameters: `E_C(0)`, `Omega_R`, `E_b` in eV and the
 * normalized detuning `delta`.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum SnStatus sn_cavity_new(double ec0,
                            double omega_r,
                            double eb,
                            double delta,
                            struct SnCavity **out);

/**
 * Overrides the saturation ratio `p_s` (default `2 Omega_R / E_b`).
 *
 * # Safety
 * `cavity` must be a live handle from [`sn_cavity_new`].
 */
enum SnStatus sn_cavity_set_saturation_ratio(struct SnCavity *cavity, double p_s);

/**
 * # Safety
 * `cavity` must be NULL or a handle from [`sn_cavity_new`] not yet freed.
 */
void sn_cavity_free(struct SnCavity *cavity);

/**
 * `k0 = E_C(0)`, the unit of in-plane wave numbers.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SnStatus sn_cavity_k0(const struct SnCavity *cavity, double *out);

/**
 * Effective saturation ratio `p_s`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SnStatus sn_cavity_saturation_ratio(const struct SnCavity *cavity, double *out);

/**
 * Bare cavity photon energy `E_C(k)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SnStatus sn_photon_energy(const struct SnCavity *cavity, double kx, double ky, double *out);

/**
 * Polariton energy on branch 1 (lower) or 2 (upper).
 *
 * # Safety
 * Pointers must be valid.
 */
enum SnStatus sn_polariton_energy(const struct SnCavity *cavity,
                                  uint8_t branch_index,
                                  double kx,
                                  double ky,
                                  double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SnStatus sn_hopfield(const struct SnCavity *cavity,
                          double kx,
                          double ky,
                          struct SnHopfield *out);

/**
 * Branch-resolved effective potential `V^{j1 j2 j3 j4}_{k, k', q}` with
 * branch indices in {1, 2}.
 *
 * # Safety
 * `branches` must point to 4 bytes; other pointers must be valid.
 */
enum SnStatus sn_effective_potential(const struct SnCavity *cavity,
                                     const double *k,
                                     const double *k_prime,
                                     const double *q,
                                     const uint8_t *branches,
                                     double *out);

/**
 * Phase-matched scattering vector for the pump `(kpx, kpy)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SnStatus sn_scattering_vector(const struct SnCavity *cavity,
                                   double kpx,
                                   double kpy,
                                   double *out_qx,
                                   double *out_qy);

/**
 * Normalized pair amplitudes `(alpha, beta)` for pump `kp` and scattering
 * vector `q`, signs preserved.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SnStatus sn_pair_amplitudes(const struct SnCavity *cavity,
                                 double kpx,
                                 double kpy,
                                 double qx,
                                 double qy,
                                 double *out_alpha,
                                 double *out_beta);

/**
 * Builds the emitted state for collinear pumps along `(direction_x,
 * direction_y)` with magnitudes in units of `k0`, propagated through media
 * with group slopes `slope_minus`, `slope_plus` and averaged over the
 * arrival window `[t_mid - dt/2, t_mid + dt/2]`. `dt = 0` gives the pure
 * state.
 *
 * # Safety
 * `magnitudes` must hold `n_pumps` values; other pointers must be valid.
 */
enum SnStatus sn_state_new(const struct SnCavity *cavity,
                           double direction_x,
                           double direction_y,
                           const double *magnitudes,
                           size_t n_pumps,
                           double slope_minus,
                           double slope_plus,
                           double t_mid,
                           double dt,
                           struct SnState **out);

/**
 * As [`sn_state_new`] in the limit of an infinite window.
 *
 * # Safety
 * `magnitudes` must hold `n_pumps` values; other pointers must be valid.
 */
enum SnStatus sn_state_new_fully_dephased(const struct SnCavity *cavity,
                                          double direction_x,
                                          double direction_y,
                                          const double *magnitudes,
                                          size_t n_pumps,
                                          struct SnState **out);

/**
 * # Safety
 * `state` must be NULL or a live state handle.
 */
void sn_state_free(struct SnState *state);

/**
 * Hilbert-space dimension `2^N` of one side, or 0 for NULL.
 *
 * # Safety
 * `state` must be NULL or a live state handle.
 */
size_t sn_state_dim(const struct SnState *state);

/**
 * Pure-state Schmidt coefficients `gamma_m` (`dim` values).
 *
 * # Safety
 * `out` must be valid for `len` doubles.
 */
enum SnStatus sn_state_gamma(const struct SnState *state, double *out, size_t len);

/**
 * Density matrix `rho_ml` in row-major order, real and imaginary parts in
 * separate buffers of `dim * dim` doubles each.
 *
 * # Safety
 * `re` and `im` must be valid for `len` doubles.
 */
enum SnStatus sn_state_density(const struct SnState *state, double *re, double *im, size_t len);

/**
 * Certifies the Schmidt number with the default support threshold and the
 * pruned search.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SnStatus sn_certify(const struct SnState *state, double tolerance, struct SnCertificate **out);

/**
 * Certification with an explicit support threshold; `exhaustive` selects
 * full subset enumeration instead of branch and bound.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SnStatus sn_certify_with(const struct SnState *state,
                              double rank_tolerance,
                              double tolerance,
                              bool exhaustive,
                              struct SnCertificate **out);

/**
 * # Safety
 * `cert` must be NULL or a live certificate handle.
 */
void sn_certificate_free(struct SnCertificate *cert);

/**
 * Certified Schmidt number, or 0 for NULL.
 *
 * # Safety
 * `cert` must be NULL or a live certificate handle.
 */
size_t sn_certificate_schmidt_number(const struct SnCertificate *cert);

/**
 * `<L>`, or NaN for NULL.
 *
 * # Safety
 * `cert` must be NULL or a live certificate handle.
 */
double sn_certificate_expectation(const struct SnCertificate *cert);

/**
 * Copies up to `len` values `f_1, f_2, ...` into `out` and returns how many
 * exist in total.
 *
 * # Safety
 * `out` must be valid for `len` doubles or be NULL with `len == 0`.
 */
size_t sn_certificate_f_values(const struct SnCertificate *cert, double *out, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLARITON_SN_H */
