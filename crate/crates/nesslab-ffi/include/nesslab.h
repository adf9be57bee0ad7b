#ifndef NESSLAB_H
#define NESSLAB_H

/* Generated by cbindgen from nesslab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Boolean verdicts of a report, addressable by index.
 */
typedef enum NesslabCriterion {
  NESSLAB_CRITERION_EFFECTIVE_COUPLING_LEFT = 0,
  NESSLAB_CRITERION_EFFECTIVE_COUPLING_RIGHT = 1,
  NESSLAB_CRITERION_TRIVIAL_COMMUTANT_LEFT = 2,
  NESSLAB_CRITERION_TRIVIAL_COMMUTANT_RIGHT = 3,
  NESSLAB_CRITERION_TRIVIAL_COMMUTANT_JOINT = 4,
  NESSLAB_CRITERION_THEOREM_APPLICABLE = 5,
  NESSLAB_CRITERION_STRICT_POSITIVITY = 6,
} NesslabCriterion;

/**
 * Result of a fallible call.
 */
typedef enum NesslabStatus {
  NESSLAB_STATUS_OK = 0,
  NESSLAB_STATUS_NULL_POINTER = 1,
  NESSLAB_STATUS_INVALID_ARGUMENT = 2,
  NESSLAB_STATUS_NUMERICAL_ERROR = 3,
  /**
   * The requested quantity was not computed (degenerate kernel or
   * non-faithful stationary state).
   */
  NESSLAB_STATUS_UNAVAILABLE = 4,
  NESSLAB_STATUS_BUFFER_TOO_SMALL = 5,
} NesslabStatus;

/**
 * Opaque small-system handle (Hamiltonian plus two couplings).
 */
typedef struct NesslabModel NesslabModel;

/**
 * Opaque analysis result handle.
 */
typedef struct NesslabReport NesslabReport;

/**
 * Opaque reservoir handle.
 */
typedef struct NesslabReservoir NesslabReservoir;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or null when the last
 * call succeeded. Free with [`nesslab_string_free`].
 */
char *nesslab_last_error_message(void);

/**
 * Free a string returned by this library. Null is accepted.
 *
 * # Safety
 * `s` must be a pointer previously returned by a nesslab function and
 * not yet freed.
 */
void nesslab_string_free(char *s);

/**
 * Single spin-½ model: H = σ₃, Q_L = Q_R = σ₁.
 */
struct NesslabModel *nesslab_model_single_spin(void);

/**
 * Two XY-coupled spins with couplings σ₁⊗1 and 1⊗σ₁.
 */
struct NesslabModel *nesslab_model_xy_two_spin(double gamma1, double gamma2);

/**
 * Build a model from three row-major interleaved `re, im` arrays of
 * length `2·dim·dim`. Returns null (with an error message) when a
 * pointer is null or an operator is not Hermitian.
 *
 * # Safety
 * Each non-null pointer must reference at least `2·dim·dim` readable
 * doubles that stay valid for the duration of the call.
 */
struct NesslabModel *nesslab_model_custom(size_t dim,
                                          const double *hamiltonian,
                                          const double *coupling_left,
                                          const double *coupling_right);

/**
 * System dimension, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
size_t nesslab_model_dim(const struct NesslabModel *model);

/**
 * # Safety
 * `model` must come from a nesslab model constructor and not be freed
 * twice. Null is accepted.
 */
void nesslab_model_free(struct NesslabModel *model);

/**
 * Flat fermionic spectral function `h(E) = 1/(1+e^{−βE})`.
 */
struct NesslabReservoir *nesslab_reservoir_flat(double beta);

/**
 * Unit-coupling normalization `h(E) = 2/(1+e^{−βE})`, under which the
 * two-spin closed-form flux and entropy values hold.
 */
struct NesslabReservoir *nesslab_reservoir_unit_coupling(double beta);

/**
 * Gaussian envelope `h(E) = e^{−E²}/(1+e^{−βE})`.
 */
struct NesslabReservoir *nesslab_reservoir_gaussian(double beta);

/**
 * Ohmic envelope `h(E) = |E|e^{−|E|}/(1+e^{−βE})`; not effectively
 * coupled at zero frequency.
 */
struct NesslabReservoir *nesslab_reservoir_ohmic(double beta);

/**
 * Tabulated spectral function from parallel `energies`/`values` arrays
 * of length `len` (ascending energies, nonnegative values). The table is
 * validated against detailed balance at `beta`.
 *
 * # Safety
 * `energies` and `values` must reference `len` readable doubles each.
 */
struct NesslabReservoir *nesslab_reservoir_tabulated(double beta,
                                                     const double *energies,
                                                     const double *values,
                                                     size_t len);

/**
 * Switch the reservoir's Lamb shift to principal-value quadrature.
 * Non-positive `cutoff` or zero `points` select the defaults
 * (cutoff 50/β, 20001 nodes).
 *
 * # Safety
 * `reservoir` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
enum NesslabStatus nesslab_reservoir_set_principal_value_lamb_shift(struct NesslabReservoir *reservoir,
                                                                    double cutoff,
                                                                    size_t points);

/**
 * Evaluate the spectral function at `energy`.
 *
 * # Safety
 * `reservoir` and `out` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
enum NesslabStatus nesslab_reservoir_h(const struct NesslabReservoir *reservoir,
                                       double energy,
                                       double *out);

/**
 * # Safety
 * `reservoir` must come from a nesslab reservoir constructor and not be
 * freed twice. Null is accepted.
 */
void nesslab_reservoir_free(struct NesslabReservoir *reservoir);

/**
 * Run the full analysis: assumption checks, generators, stationary
 * state, flux, and entropy production. Tolerances that are zero or
 * negative select the defaults (cluster 1e−9, rank 1e−9, positivity
 * 1e−12). On success `*out` owns a fresh report handle.
 *
 * # Safety
 * `model`, `left`, `right`, and `out` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
enum NesslabStatus nesslab_theorem_check(const struct NesslabModel *model,
                                         const struct NesslabReservoir *left,
                                         const struct NesslabReservoir *right,
                                         double cluster_tol,
                                         double rank_tol,
                                         double pos_tol,
                                         struct NesslabReport **out);

/**
 * Kernel dimension of the total generator, or 0 for a null handle.
 *
 * # Safety
 * `report` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
size_t nesslab_report_kernel_dim(const struct NesslabReport *report);

/**
 * Smallest nonzero singular value of the generator; NaN for null input.
 *
 * # Safety
 * `report` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
double nesslab_report_spectral_gap(const struct NesslabReport *report);

/**
 * Boolean verdict: 1 true, 0 false, −1 for null input or a verdict that
 * was not computed.
 *
 * # Safety
 * `report` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
int32_t nesslab_report_criterion(const struct NesslabReport *report,
                                 enum NesslabCriterion criterion);

/**
 * Steady-state energy flux `tr(H·K_L·ρ₀)`.
 *
 * # Safety
 * `report` and `out` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
enum NesslabStatus nesslab_report_sigma0(const struct NesslabReport *report, double *out);

/**
 * Entropy production of the left reservoir at the steady state.
 *
 * # Safety
 * `report` and `out` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
enum NesslabStatus nesslab_report_sigma_left(const struct NesslabReport *report, double *out);

/**
 * Entropy production of the right reservoir at the steady state.
 *
 * # Safety
 * `report` and `out` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
enum NesslabStatus nesslab_report_sigma_right(const struct NesslabReport *report, double *out);

/**
 * Total entropy production `σ_L + σ_R` at the steady state.
 *
 * # Safety
 * `report` and `out` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
enum NesslabStatus nesslab_report_sigma_total(const struct NesslabReport *report, double *out);

/**
 * Copy the steady state into `buffer` as row-major interleaved `re, im`
 * doubles; `len` must be at least `2·dim·dim`.
 *
 * # Safety
 * `buffer` must reference `len` writable doubles.
 */
enum NesslabStatus nesslab_report_ness(const struct NesslabReport *report,
                                       double *buffer,
                                       size_t len);

/**
 * Render the same JSON report the CLI `check` command emits. Free the
 * returned string with [`nesslab_string_free`]; null for a null handle.
 *
 * # Safety
 * `report` must be null or valid handles from the matching nesslab
 * constructor, alive for the duration of the call.
 */
char *nesslab_report_to_json(const struct NesslabReport *report);

/**
 * # Safety
 * `report` must come from [`nesslab_theorem_check`] and not be freed
 * twice. Null is accepted.
 */
void nesslab_report_free(struct NesslabReport *report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NESSLAB_H */
