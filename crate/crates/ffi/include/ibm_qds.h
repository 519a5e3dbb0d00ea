#ifndef IBM_QDS_H
#define IBM_QDS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IbmQdsStatus {
  IBM_QDS_STATUS_OK = 0,
  IBM_QDS_STATUS_NULL_POINTER = 1,
  IBM_QDS_STATUS_DOMAIN = 2,
  IBM_QDS_STATUS_NO_CONVERGENCE = 3,
  IBM_QDS_STATUS_HARMONIC_BREAKDOWN = 4,
  IBM_QDS_STATUS_INDEX_OUT_OF_RANGE = 5,
  IBM_QDS_STATUS_AMBIGUOUS = 6,
  IBM_QDS_STATUS_NO_PHASE = 7,
  IBM_QDS_STATUS_BUFFER_TOO_SMALL = 8,
  IBM_QDS_STATUS_INTERNAL = 9,
} IbmQdsStatus;

typedef enum IbmQdsPhase {
  IBM_QDS_PHASE_U5 = 0,
  IBM_QDS_PHASE_O6 = 1,
  IBM_QDS_PHASE_TRANSITION = 2,
} IbmQdsPhase;

// Eigenvalues and eigenvectors of one seniority sector.
typedef struct IbmQdsEigen IbmQdsEigen;

// Model parameters (N, alpha).
typedef struct IbmQdsModel IbmQdsModel;

typedef struct IbmQdsRpa {
  double a;
  double b;
  double epsilon;
  double x;
  double y;
  double be2;
} IbmQdsRpa;

typedef struct IbmQdsHarmonic {
  double n0;
  double kinetic;
  double curvature;
  double omega;
  double u_min;
  double width;
} IbmQdsHarmonic;

// Deviations are `INFINITY` where the reference model does not apply.
typedef struct IbmQdsVerdict {
  enum IbmQdsPhase label;
  double u5_deviation;
  double o6_deviation;
} IbmQdsVerdict;

typedef struct IbmQdsWidth {
  double alpha_lo;
  double alpha_hi;
  double width;
} IbmQdsWidth;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null if none. The pointer
// stays valid until the next failing call on the same thread.
const char *ibm_qds_last_error(void);

// Creates a model with `n_bosons >= 1` and `0 <= alpha <= 1`.
//
// # Safety
// `model` must be a valid pointer to writable storage.
enum IbmQdsStatus ibm_qds_model_new(uint32_t n_bosons, double alpha, struct IbmQdsModel **model);

// # Safety
// `model` must come from `ibm_qds_model_new` and not be freed twice; null is ignored.
void ibm_qds_model_free(struct IbmQdsModel *model);

// Diagonalizes seniority sector `seniority`.
//
// # Safety
// `model` must be a live handle and `eigen` valid writable storage.
enum IbmQdsStatus ibm_qds_sector_solve(const struct IbmQdsModel *model,
                                       uint32_t seniority,
                                       struct IbmQdsEigen **eigen);

// # Safety
// `eigen` must come from `ibm_qds_sector_solve`; null is ignored.
void ibm_qds_eigen_free(struct IbmQdsEigen *eigen);

// Sector dimension, 0 for a null handle.
//
// # Safety
// `eigen` must be null or a live handle.
uintptr_t ibm_qds_eigen_dimension(const struct IbmQdsEigen *eigen);

// Copies the ascending eigenvalues into `buf` (capacity `len`).
//
// # Safety
// `eigen` must be a live handle and `buf` writable for `len` doubles.
enum IbmQdsStatus ibm_qds_eigen_values(const struct IbmQdsEigen *eigen, double *buf, uintptr_t len);

// Copies eigenvector `k` (components ordered by d-boson number) into `buf`.
//
// # Safety
// `eigen` must be a live handle and `buf` writable for `len` doubles.
enum IbmQdsStatus ibm_qds_eigen_vector(const struct IbmQdsEigen *eigen,
                                       uintptr_t k,
                                       double *buf,
                                       uintptr_t len);

// B(E2) from the ground state to the first excited state, in units where
// the pure vibrator gives 100.
//
// # Safety
// `model` must be a live handle and `be2` writable.
enum IbmQdsStatus ibm_qds_be2(const struct IbmQdsModel *model, double *be2);

// Quasi-boson solution, defined for `0 <= alpha < 0.5`.
//
// # Safety
// `result` must be writable.
enum IbmQdsStatus ibm_qds_rpa(double alpha, struct IbmQdsRpa *result);

// Oscillator fit of sector `seniority`, defined for `0.5 < alpha <= 1`.
//
// # Safety
// `model` must be a live handle and `result` writable.
enum IbmQdsStatus ibm_qds_harmonic_fit(const struct IbmQdsModel *model,
                                       uint32_t seniority,
                                       struct IbmQdsHarmonic *result);

// Classical energy surface at deformation `beta >= 0`.
//
// # Safety
// `value` must be writable.
enum IbmQdsStatus ibm_qds_potential(double alpha, uint32_t n_bosons, double beta, double *value);

// Phase verdict at the model's alpha.
//
// # Safety
// `model` must be a live handle and `verdict` writable.
enum IbmQdsStatus ibm_qds_classify(const struct IbmQdsModel *model,
                                   double tolerance,
                                   uintptr_t levels,
                                   struct IbmQdsVerdict *verdict);

// Width of the transitional region for `n_bosons`, scanned at spacing `step`.
//
// # Safety
// `width` must be writable.
enum IbmQdsStatus ibm_qds_transition_width(uint32_t n_bosons,
                                           double tolerance,
                                           uintptr_t levels,
                                           double step,
                                           struct IbmQdsWidth *width);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IBM_QDS_H */
