#ifndef KARP_H
#define KARP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KarpStatus {
  KARP_STATUS_OK = 0,
  /**
   * The oracle answered NO, or the certificate is invalid.
   */
  KARP_STATUS_NO = 1,
  KARP_STATUS_NULL_POINTER = 2,
  KARP_STATUS_INVALID_UTF8 = 3,
  KARP_STATUS_PARSE = 4,
  KARP_STATUS_INVALID_INSTANCE = 5,
  KARP_STATUS_INVALID_CERTIFICATE = 6,
  KARP_STATUS_KIND_MISMATCH = 7,
  KARP_STATUS_UNKNOWN_NAME = 8,
  KARP_STATUS_BUDGET_EXCEEDED = 9,
  KARP_STATUS_UNSUPPORTED = 10,
  KARP_STATUS_PANIC = 11,
} KarpStatus;

typedef enum KarpSizeMode {
  KARP_SIZE_MODE_ELEMENT = 0,
  KARP_SIZE_MODE_BITS = 1,
} KarpSizeMode;

/**
 * Opaque certificate.
 */
typedef struct KarpCertificate KarpCertificate;

/**
 * Opaque problem instance.
 */
typedef struct KarpInstance KarpInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a `{"kind", "payload"}` envelope.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum KarpStatus karp_instance_from_json(const char *json, struct KarpInstance **out);

/**
 * # Safety
 * `instance` must come from this library; `out` must be writable.
 */
enum KarpStatus karp_instance_to_json(const struct KarpInstance *instance, char **out);

/**
 * Writes the instance's kind tag.
 *
 * # Safety
 * As for [`karp_instance_to_json`].
 */
enum KarpStatus karp_instance_kind(const struct KarpInstance *instance, char **out);

/**
 * # Safety
 * `instance` must come from this library and not be used afterwards.
 * Null is ignored.
 */
void karp_instance_free(struct KarpInstance *instance);

/**
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum KarpStatus karp_certificate_from_json(const char *json, struct KarpCertificate **out);

/**
 * # Safety
 * `cert` must come from this library; `out` must be writable.
 */
enum KarpStatus karp_certificate_to_json(const struct KarpCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must come from this library and not be used afterwards. Null is
 * ignored.
 */
void karp_certificate_free(struct KarpCertificate *cert);

/**
 * # Safety
 * `instance` must come from this library; `out` must be writable.
 */
enum KarpStatus karp_measure(const struct KarpInstance *instance,
                             enum KarpSizeMode mode,
                             uint64_t *out);

/**
 * Applies the reduction named `reduction_id`.
 *
 * # Safety
 * `instance` must come from this library, `reduction_id` must be a valid C
 * string and `out` writable.
 */
enum KarpStatus karp_reduce(const struct KarpInstance *instance,
                            const char *reduction_id,
                            struct KarpInstance **out);

/**
 * Routes the instance into the kernel. `manifest` receives the chain as a
 * JSON list of reduction ids and may be null.
 *
 * # Safety
 * `instance` must come from this library; `out` must be writable;
 * `manifest` must be writable or null.
 */
enum KarpStatus karp_route_to_kernel(const struct KarpInstance *instance,
                                     struct KarpInstance **out,
                                     char **manifest);

/**
 * Decides the instance exhaustively. Returns `Ok` with a certificate for
 * YES, `No` with `*cert` set to null for NO, and `BudgetExceeded` when the
 * candidate space is larger than `budget`.
 *
 * # Safety
 * `instance` must come from this library; `cert` must be writable.
 */
enum KarpStatus karp_solve(const struct KarpInstance *instance,
                           uint64_t budget,
                           struct KarpCertificate **cert);

/**
 * Returns `Ok` for a valid certificate and `No` for an invalid one.
 *
 * # Safety
 * Both handles must come from this library.
 */
enum KarpStatus karp_verify(const struct KarpInstance *instance,
                            const struct KarpCertificate *cert);

/**
 * Lifts `cert`, a certificate for the output of the chain in `chain_json`
 * (a JSON list of reduction ids), back to `source`.
 *
 * # Safety
 * Handles must come from this library, `chain_json` must be a valid C
 * string and `out` writable.
 */
enum KarpStatus karp_lift(const struct KarpInstance *source,
                          const char *chain_json,
                          const struct KarpCertificate *cert,
                          struct KarpCertificate **out);

/**
 * Audits a reduction over the generator spec in `family_json` at
 * `scale_count` scale points and writes the report as JSON. Returns `No`
 * when the bound or a count formula fails.
 *
 * # Safety
 * Strings must be valid C strings, `scales` must point to `scale_count`
 * values (or be null when the count is zero) and `report_json` writable.
 */
enum KarpStatus karp_audit(const char *reduction_id,
                           const char *family_json,
                           const size_t *scales,
                           size_t scale_count,
                           char **report_json);

/**
 * Generates an instance from a JSON generator spec.
 *
 * # Safety
 * `spec_json` must be a valid C string; `out` must be writable.
 */
enum KarpStatus karp_generate(const char *spec_json, struct KarpInstance **out);

/**
 * # Safety
 * `s` must be a string returned by this library, or null.
 */
void karp_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null after a
 * successful call. Valid until the next call on the same thread.
 */
const char *karp_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KARP_H */
