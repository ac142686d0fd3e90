#ifndef NFCONST_H
#define NFCONST_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum NfStatus {
  NF_STATUS_OK = 0,
  NF_STATUS_INVALID_ARGUMENT = 1,
  NF_STATUS_PARSE_ERROR = 2,
  NF_STATUS_OVERFLOW = 3,
  NF_STATUS_UNSUPPORTED = 4,
  NF_STATUS_INFEASIBLE = 5,
  NF_STATUS_INTERNAL = 6,
  NF_STATUS_IO = 7,
  NF_STATUS_NULL_POINTER = 8,
  NF_STATUS_BUFFER_TOO_SMALL = 9,
  NF_STATUS_PANIC = 10,
} NfStatus;

/**
 * A fundamental domain for the unit group of a field.
 */
typedef struct NfDomain NfDomain;

/**
 * A number field.
 */
typedef struct NfField NfField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to fit) and returns the full message length, 0 if there is none.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t nf_last_error(char *buf, size_t len);

/**
 * Parses a field spec such as `quadratic d=-1` or `monogenic poly=-2,0,0,1`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NfStatus nf_field_new(const char *spec, struct NfField **out_field);

/**
 * # Safety
 * `field` must come from [`nf_field_new`] and not be used afterwards.
 */
void nf_field_free(struct NfField *field);

/**
 * # Safety
 * Pointers must be valid.
 */
enum NfStatus nf_field_degree(const struct NfField *field, size_t *out_degree);

/**
 * Field norm of the element with the given coordinates.
 *
 * # Safety
 * `coords` must hold `len` values; other pointers must be valid.
 */
enum NfStatus nf_element_norm(const struct NfField *field,
                              const int64_t *coords,
                              size_t len,
                              int64_t *out_norm);

/**
 * Whether the element generates a prime ideal.
 *
 * # Safety
 * `coords` must hold `len` values; other pointers must be valid.
 */
enum NfStatus nf_is_prime_element(const struct NfField *field,
                                  const int64_t *coords,
                                  size_t len,
                                  bool *out_prime);

/**
 * Truncated von Mangoldt weight of the principal ideal, with the bump cutoff.
 *
 * # Safety
 * `coords` must hold `len` values; other pointers must be valid.
 */
enum NfStatus nf_lambda(const struct NfField *field,
                        const int64_t *coords,
                        size_t len,
                        double r,
                        double *out_value);

/**
 * The standard fundamental domain (first embedding, computed or supplied units).
 *
 * # Safety
 * Pointers must be valid.
 */
enum NfStatus nf_domain_new(const struct NfField *field, struct NfDomain **out_domain);

/**
 * # Safety
 * `domain` must come from [`nf_domain_new`] and not be used afterwards.
 */
void nf_domain_free(struct NfDomain *domain);

/**
 * # Safety
 * `coords` must hold `len` values; other pointers must be valid.
 */
enum NfStatus nf_in_domain(const struct NfDomain *domain,
                           const int64_t *coords,
                           size_t len,
                           bool *out_inside);

/**
 * Writes the associate of the element lying in the domain to `out_coords` (`len` values).
 *
 * # Safety
 * `coords` and `out_coords` must hold `len` values; `domain` must be valid.
 */
enum NfStatus nf_canonical_associate(const struct NfDomain *domain,
                                     const int64_t *coords,
                                     size_t len,
                                     int64_t *out_coords);

/**
 * Number of associates of the element with all coordinates at most `m` in absolute value.
 *
 * # Safety
 * `coords` must hold `len` values; other pointers must be valid.
 */
enum NfStatus nf_orbit_count(const struct NfDomain *domain,
                             const int64_t *coords,
                             size_t len,
                             double m,
                             uint64_t *out_count);

/**
 * Classes of primitive forms of discriminant `disc` (positive definite ones when `disc` < 0).
 *
 * # Safety
 * `out_h` must be valid.
 */
enum NfStatus nf_class_number(int64_t disc, uint64_t *out_h);

/**
 * Canonical representative of the class of a x^2 + b x y + c y^2, written to `out_abc[0..3]`.
 *
 * # Safety
 * `out_abc` must hold three values.
 */
enum NfStatus nf_reduce_form(int64_t a, int64_t b, int64_t c, int64_t *out_abc);

/**
 * Cutoff value chi(x); `delta` = 0 selects the bump, otherwise the smoothed triangle.
 *
 * # Safety
 * `out_value` must be valid.
 */
enum NfStatus nf_chi(double x, double delta, double *out_value);

/**
 * c_chi for the cutoff selected as in [`nf_chi`].
 *
 * # Safety
 * `out_value` must be valid.
 */
enum NfStatus nf_c_chi(double delta, double *out_value);

/**
 * Runs an experiment from a JSON config and returns the JSON report in a
 * newly allocated string, released with [`nf_string_free`].
 *
 * # Safety
 * `config_json` must be NUL-terminated; `out_report` must be valid.
 */
enum NfStatus nf_run_experiment_json(const char *config_json, char **out_report);

/**
 * Copies the `data` section of a report for `config_json` into `buf`.
 * Returns BufferTooSmall (with the needed size in `out_len`) when it does not fit.
 *
 * # Safety
 * `buf` must be valid for `len` bytes; other pointers must be valid.
 */
enum NfStatus nf_run_experiment_data(const char *config_json,
                                     char *buf,
                                     size_t len,
                                     size_t *out_len);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void nf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NFCONST_H */
