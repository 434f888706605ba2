#ifndef QBOUNCE_H
#define QBOUNCE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a call.
typedef enum QbStatus {
  QB_STATUS_OK = 0,
  QB_STATUS_NULL_POINTER = 1,
  QB_STATUS_INVALID_ARGUMENT = 2,
  QB_STATUS_NUMERICAL_FAILURE = 3,
  QB_STATUS_PANIC = 4,
} QbStatus;

// Effective-range coefficients (ℓ, α₀, α₂).
typedef struct QbCoefficients QbCoefficients;

// Casimir–Polder potential model.
typedef struct QbModel QbModel;

// Atom mass and gravity.
typedef struct QbSetup QbSetup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length without the NUL.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t qb_last_error_message(char *buf, size_t len);

// Creates a setup for the given mass (kg) and gravity (m/s²).
//
// # Safety
// `out` must be a valid pointer.
enum QbStatus qb_setup_new(double mass, double gravity, struct QbSetup **out);

// Hydrogen atom in standard gravity.
//
// # Safety
// `out` must be a valid pointer.
enum QbStatus qb_setup_hydrogen(struct QbSetup **out);

// # Safety
// `setup` must come from a `qb_setup_*` constructor, or be null.
void qb_setup_free(struct QbSetup *setup);

// Gravitational length ℓ_g (m) and energy ε_g (J).
//
// # Safety
// All pointers must be valid.
enum QbStatus qb_setup_scales(const struct QbSetup *setup, double *ell_g, double *eps_g);

// Homogeneous −C4/z⁴ model (C4 in J·m⁴).
//
// # Safety
// `out` must be a valid pointer.
enum QbStatus qb_model_v4(double c4, struct QbModel **out);

// Interpolating −C4/(z³(z + C4/C3)) model (C3 in J·m³, C4 in J·m⁴).
//
// # Safety
// `out` must be a valid pointer.
enum QbStatus qb_model_v3v4(double c3, double c4, struct QbModel **out);

// # Safety
// `model` must come from a `qb_model_*` constructor, or be null.
void qb_model_free(struct QbModel *model);

// Coefficients of a shipped surface preset (`perfect-mirror`, `silicon`, `silica`).
//
// # Safety
// `name` must be a NUL-terminated string, `out` a valid pointer.
enum QbStatus qb_coefficients_preset(const char *name, struct QbCoefficients **out);

// Coefficients from explicit values (ℓ in metres).
//
// # Safety
// `out` must be a valid pointer.
enum QbStatus qb_coefficients_new(double ell,
                                  double alpha0_re,
                                  double alpha0_im,
                                  double alpha2_re,
                                  double alpha2_im,
                                  struct QbCoefficients **out);

// # Safety
// `coeffs` must come from a `qb_coefficients_*` constructor, or be null.
void qb_coefficients_free(struct QbCoefficients *coeffs);

// Complex scattering length a (m).
//
// # Safety
// All pointers must be valid.
enum QbStatus qb_coefficients_scattering_length(const struct QbCoefficients *coeffs,
                                                double *re,
                                                double *im);

// Ai, Ai′, Bi, Bi′ at z, written as 8 doubles (re, im pairs in that order).
//
// # Safety
// `out` must point to 8 writable doubles.
enum QbStatus qb_airy(double re, double im, double *out);

// n-th Airy zero as a positive number λ_n (Ai(−λ_n) = 0), n ≥ 1.
//
// # Safety
// `out` must be a valid pointer.
enum QbStatus qb_airy_zero(size_t n, double *out);

// Ideal bouncer levels E_n = λ_n ε_g for n = 1..=n_max.
//
// # Safety
// `out` must point to `n_max` writable doubles.
enum QbStatus qb_ideal_levels(const struct QbSetup *setup, size_t n_max, double *out);

// Reflection amplitude r(k) of the model's CP tail on an absorbing surface.
//
// # Safety
// All pointers must be valid.
enum QbStatus qb_reflection(const struct QbSetup *setup,
                            const struct QbModel *model,
                            double k,
                            double *r_re,
                            double *r_im);

// Resonance energies (J) by direct integration, n = 1..=n_max.
//
// # Safety
// `out` must point to `n_max` writable doubles.
enum QbStatus qb_resonances_numeric(const struct QbSetup *setup,
                                    const struct QbModel *model,
                                    size_t n_max,
                                    double *out);

// Resonance energies (J) of the effective-range model, n = 1..=n_max.
//
// # Safety
// `out` must point to `n_max` writable doubles.
enum QbStatus qb_resonances_effective_range(const struct QbSetup *setup,
                                            const struct QbCoefficients *coeffs,
                                            size_t n_max,
                                            double *out);

// Complex poles (J) of the cavity response for the effective-range model.
//
// # Safety
// `re` and `im` must each point to `n_max` writable doubles.
enum QbStatus qb_poles_effective_range(const struct QbSetup *setup,
                                       const struct QbCoefficients *coeffs,
                                       size_t n_max,
                                       double *re,
                                       double *im);

// Complex poles (J) of the cavity response by direct integration.
//
// # Safety
// `re` and `im` must each point to `n_max` writable doubles.
enum QbStatus qb_poles_numeric(const struct QbSetup *setup,
                               const struct QbModel *model,
                               size_t n_max,
                               double *re,
                               double *im);

// Lifetime −ħ/(2 Im ℰ) in seconds for a pole with imaginary part `im_energy` (J).
double qb_lifetime(double im_energy);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QBOUNCE_H */
