#ifndef FFD_H
#define FFD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FfdStatus {
  FFD_STATUS_OK = 0,
  FFD_STATUS_NULL_ARGUMENT = 1,
  FFD_STATUS_PARSE = 2,
  FFD_STATUS_INVALID_CURVE = 3,
  FFD_STATUS_PRECONDITION = 4,
  FFD_STATUS_VERIFICATION = 5,
  FFD_STATUS_INTERNAL = 6,
  FFD_STATUS_PANIC = 7,
} FfdStatus;

/**
 * Opaque rank-r bundle handle.
 */
typedef struct FfdBundle FfdBundle;

/**
 * Opaque curve handle.
 */
typedef struct FfdCurve FfdCurve;

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *ffd_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void ffd_string_free(char *s);

/**
 * Loads a curve from its JSON config `{"m": .., "h": [..], "f": [..]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FfdStatus ffd_curve_new(const char *json, struct FfdCurve **out);

/**
 * # Safety
 * `c` must be NULL or a handle from `ffd_curve_new`, not yet freed.
 */
void ffd_curve_free(struct FfdCurve *c);

/**
 * # Safety
 * `c` must be a live curve handle; `out` must be writable.
 */
enum FfdStatus ffd_curve_genus(const struct FfdCurve *c, uint32_t *out);

/**
 * The theta characteristic B as `{"B": divisor, "degree": int}`.
 *
 * # Safety
 * `c` must be a live curve handle; `out` must be writable.
 */
enum FfdStatus ffd_raynaud(const struct FfdCurve *c, char **out);

/**
 * F_*L for a line class given as a divisor literal.
 *
 * # Safety
 * `c` must be a live curve handle, `class` a NUL-terminated string and
 * `out` writable.
 */
enum FfdStatus ffd_push_forward(const struct FfdCurve *c,
                                const char *class_,
                                struct FfdBundle **out);

/**
 * # Safety
 * `c` must be a live curve handle, `json` a NUL-terminated bundle literal
 * and `out` writable.
 */
enum FfdStatus ffd_bundle_from_json(const struct FfdCurve *c,
                                    const char *json,
                                    struct FfdBundle **out);

/**
 * # Safety
 * `v` must be a live bundle handle; `out` must be writable.
 */
enum FfdStatus ffd_bundle_to_json(const struct FfdBundle *v, char **out);

/**
 * # Safety
 * `v` must be NULL or a bundle handle from this library, not yet freed.
 */
void ffd_bundle_free(struct FfdBundle *v);

/**
 * # Safety
 * Handles must be live and created over the same curve; `out` writable.
 */
enum FfdStatus ffd_bundle_degree(const struct FfdCurve *c, const struct FfdBundle *v, int64_t *out);

/**
 * # Safety
 * Handles must be live and created over the same curve; `out` writable.
 */
enum FfdStatus ffd_frob_pull(const struct FfdCurve *c,
                             const struct FfdBundle *v,
                             struct FfdBundle **out);

/**
 * Stability data of a rank-2 bundle: s, maximal sub, flags, polygon, stratum.
 *
 * # Safety
 * Handles must be live and created over the same curve; `out` writable.
 */
enum FfdStatus ffd_stability(const struct FfdCurve *c, const struct FfdBundle *v, char **out);

/**
 * The construction datum of a Frobenius-destabilized stable bundle.
 *
 * # Safety
 * Handles must be live and created over the same curve; `out` writable.
 */
enum FfdStatus ffd_classify(const struct FfdCurve *c, const struct FfdBundle *v, char **out);

#endif  /* FFD_H */
