#ifndef WITTCALC_H
#define WITTCALC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes shared by every function.
 */
typedef enum WcStatus {
  WC_STATUS_OK = 0,
  WC_STATUS_NULL_POINTER = 1,
  WC_STATUS_INVALID_UTF8 = 2,
  WC_STATUS_PARSE_ERROR = 3,
  WC_STATUS_DOMAIN_ERROR = 4,
  WC_STATUS_VERIFICATION_FAILED = 5,
  WC_STATUS_PANIC = 6,
} WcStatus;

/**
 * Opaque diagonal quadratic form.
 */
typedef struct WcForm WcForm;

/**
 * Opaque Witt class.
 */
typedef struct WcWittClass WcWittClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the next call.
 */
const char *wc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *wc_version(void);

/**
 * Run one command-line request.
 *
 * `request` is `{"args": [...], "input": <payload>}`; `args` omits the program
 * name and `input` is optional. `*response` receives the JSON report and
 * `*exit_code` the process exit status the command line would return.
 *
 * # Safety
 * `request` must be a NUL-terminated string; `response` and `exit_code` must be writable.
 */
enum WcStatus wc_run(const char *request, char **response, int32_t *exit_code);

/**
 * Parse a diagonal form. `field` is `q`, `fp:<p>`, `r` or `formal:<g>`; `entries`
 * is a JSON array of square classes.
 *
 * # Safety
 * Both strings must be NUL-terminated; `form` must be writable.
 */
enum WcStatus wc_form_new(const char *field, const char *entries, struct WcForm **form);

/**
 * # Safety
 * `form` must come from this library and not be used afterwards. Null is ignored.
 */
void wc_form_free(struct WcForm *form);

/**
 * # Safety
 * `form` must be a live handle; `dim` must be writable.
 */
enum WcStatus wc_form_dim(const struct WcForm *form, size_t *dim);

/**
 * The exterior power form of degree `d`.
 *
 * # Safety
 * `form` must be a live handle; `result` must be writable.
 */
enum WcStatus wc_form_lambda(const struct WcForm *form, size_t d, struct WcForm **result);

/**
 * The form's entries as a JSON array. Release with [`wc_string_free`].
 *
 * # Safety
 * `form` must be a live handle; `json` must be writable.
 */
enum WcStatus wc_form_to_json(const struct WcForm *form, char **json);

/**
 * # Safety
 * `form` must be a live handle; `class` must be writable.
 */
enum WcStatus wc_form_witt_class(const struct WcForm *form, struct WcWittClass **class_);

/**
 * # Safety
 * `class` must come from this library and not be used afterwards. Null is ignored.
 */
void wc_witt_free(struct WcWittClass *class_);

/**
 * Equality in the Witt ring.
 *
 * # Safety
 * `a` and `b` must be live handles; `equal` must be writable.
 */
enum WcStatus wc_witt_eq(const struct WcWittClass *a, const struct WcWittClass *b, bool *equal);

/**
 * The class as a JSON array of `{class, coeff}` terms. Release with [`wc_string_free`].
 *
 * # Safety
 * `class` must be a live handle; `json` must be writable.
 */
enum WcStatus wc_witt_to_json(const struct WcWittClass *class_, char **json);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void wc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WITTCALC_H */
