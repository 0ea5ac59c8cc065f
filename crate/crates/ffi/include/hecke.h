#ifndef HECKE_H
#define HECKE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stdint.h>

/**
 * Result code of every call. Codes 2 to 4 match the command-line exit codes.
 */
typedef enum HeckeStatus {
  HECKE_STATUS_OK = 0,
  HECKE_STATUS_NULL_POINTER = 1,
  HECKE_STATUS_PARSE = 2,
  HECKE_STATUS_INSTANCE_MISMATCH = 3,
  HECKE_STATUS_DOMAIN = 4,
  HECKE_STATUS_INVALID_UTF8 = 5,
  HECKE_STATUS_PANIC = 6,
} HeckeStatus;

/**
 * An element of the crossed product of some instance.
 */
typedef struct HeckeCp HeckeCp;

/**
 * An element of the Hecke algebra of some instance.
 */
typedef struct HeckeElem HeckeElem;

/**
 * A Hecke pair together with its algebra.
 */
typedef struct HeckeInstance HeckeInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread; empty after a
 * success. Valid until the next call on the same thread.
 */
const char *hecke_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void hecke_string_free(char *s);

/**
 * Creates an instance from a descriptor: `bc`, `bc:2,3`, `gl:1`..`gl:3`
 * or `gauss`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be writable.
 */
enum HeckeStatus hecke_instance_new(const char *descriptor, struct HeckeInstance **out);

/**
 * # Safety
 * `inst` must be null or a handle from [`hecke_instance_new`].
 */
void hecke_instance_free(struct HeckeInstance *inst);

/**
 * # Safety
 * `e` must be null or an element handle from this library.
 */
void hecke_element_free(struct HeckeElem *e);

/**
 * # Safety
 * `c` must be null or a crossed-product handle from this library.
 */
void hecke_cp_free(struct HeckeCp *c);

/**
 * Parses an element file (`instance <desc>` header, then
 * `<coeff> [<element>]` lines).
 *
 * # Safety
 * Pointers must be valid; `src` NUL-terminated.
 */
enum HeckeStatus hecke_element_parse(const struct HeckeInstance *inst,
                                     const char *src,
                                     struct HeckeElem **out);

/**
 * The basis element `[γ]` of a group element such as `(1/2; 2)`.
 *
 * # Safety
 * Pointers must be valid; `elem` NUL-terminated.
 */
enum HeckeStatus hecke_element_basis(const struct HeckeInstance *inst,
                                     const char *elem,
                                     struct HeckeElem **out);

/**
 * Renders an element in the element-file grammar.
 *
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_element_render(const struct HeckeInstance *inst,
                                      const struct HeckeElem *e,
                                      char **out);

/**
 * Exact equality of two elements.
 *
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_element_equal(const struct HeckeElem *a,
                                     const struct HeckeElem *b,
                                     bool *out);

/**
 * Convolution product `a ∗ b`.
 *
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_convolve(const struct HeckeInstance *inst,
                                const struct HeckeElem *a,
                                const struct HeckeElem *b,
                                struct HeckeElem **out);

/**
 * Sum `a + b`.
 *
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_add(const struct HeckeElem *a,
                           const struct HeckeElem *b,
                           struct HeckeElem **out);

/**
 * The involution `f*(γ) = f(γ⁻¹)`.
 *
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_involution(const struct HeckeInstance *inst,
                                  const struct HeckeElem *a,
                                  struct HeckeElem **out);

/**
 * Right and left coset counts `R(γ)`, `L(γ)` of a group element.
 *
 * # Safety
 * Pointers must be valid; `elem` NUL-terminated; outputs writable.
 */
enum HeckeStatus hecke_coset_counts(const struct HeckeInstance *inst,
                                    const char *elem,
                                    uint64_t *r,
                                    uint64_t *l);

/**
 * Parses a crossed-product element (`<coeff> mu*(<t>) e[<x>] mu(<s>)` lines).
 *
 * # Safety
 * Pointers must be valid; `src` NUL-terminated.
 */
enum HeckeStatus hecke_cp_parse(const struct HeckeInstance *inst,
                                const char *src,
                                struct HeckeCp **out);

/**
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_cp_render(const struct HeckeInstance *inst,
                                 const struct HeckeCp *c,
                                 char **out);

/**
 * Crossed-product multiplication.
 *
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_cp_mul(const struct HeckeInstance *inst,
                              const struct HeckeCp *a,
                              const struct HeckeCp *b,
                              struct HeckeCp **out);

/**
 * Crossed-product involution.
 *
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_cp_star(const struct HeckeInstance *inst,
                               const struct HeckeCp *a,
                               struct HeckeCp **out);

/**
 * The canonical map from the crossed product into the Hecke algebra.
 *
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_cp_embed(const struct HeckeInstance *inst,
                                const struct HeckeCp *a,
                                struct HeckeElem **out);

/**
 * Inverse of [`hecke_cp_embed`].
 *
 * # Safety
 * Pointers must be valid handles; `out` must be writable.
 */
enum HeckeStatus hecke_cp_unembed(const struct HeckeInstance *inst,
                                  const struct HeckeElem *a,
                                  struct HeckeCp **out);

/**
 * The corner endomorphism `α_s` on an element supported in `N`.
 *
 * # Safety
 * Pointers must be valid; `s` NUL-terminated; `out` writable.
 */
enum HeckeStatus hecke_alpha(const struct HeckeInstance *inst,
                             const char *s,
                             const struct HeckeElem *a,
                             struct HeckeElem **out);

/**
 * Runs the property suites (all of them when `suite` is null) and
 * returns the JSON report; `passed` is false if any suite failed.
 *
 * # Safety
 * `suite` must be null or NUL-terminated; outputs must be writable.
 */
enum HeckeStatus hecke_selftest(uint64_t seed, const char *suite, char **report, bool *passed);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hecke_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HECKE_H */
