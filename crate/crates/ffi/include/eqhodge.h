#ifndef EQHODGE_H
#define EQHODGE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EqhStatus {
  EQH_STATUS_OK = 0,
  EQH_STATUS_NULL_POINTER = 1,
  EQH_STATUS_CONFIG = 2,
  EQH_STATUS_HYPOTHESIS = 3,
  EQH_STATUS_INTERNAL = 4,
  EQH_STATUS_BUFFER_TOO_SMALL = 5,
  EQH_STATUS_PANIC = 6,
} EqhStatus;

/**
 * A Galois cover of the projective line.
 */
typedef struct EqhCover EqhCover;

/**
 * A minimal Weierstrass surface together with its fiber analysis.
 */
typedef struct EqhSurface EqhSurface;

typedef struct EqhInvariants {
  uint32_t n;
  uint32_t d_e;
  uint32_t c_e;
  uint32_t mu;
  uint32_t singular_fibers;
  bool isotrivial;
} EqhInvariants;

/**
 * `a [C[G]] + b chi(O) + c [C] - delta [H^0(T)]`, with `b` split by side.
 */
typedef struct EqhClass {
  int64_t a;
  int64_t b;
  int64_t c;
  int64_t delta;
  int64_t b_structure;
  int64_t b_canonical;
} EqhClass;

typedef struct EqhMwBound {
  int64_t rank_bound_dim;
  int64_t pal_bound;
  int64_t pal_bound_plus_variant;
  uint32_t epsilon;
} EqhMwBound;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a surface from coefficient strings (`"num/den"` or integers,
 * lowest degree first). Fails on non-minimal or singular input.
 *
 * # Safety
 * `a` and `b` point to `a_len` and `b_len` NUL-terminated strings; `out` is
 * writable.
 */
enum EqhStatus eqh_surface_new(uint32_t n,
                               const char *const *a,
                               size_t a_len,
                               const char *const *b,
                               size_t b_len,
                               struct EqhSurface **out_surface);

/**
 * # Safety
 * `surface` is a live handle and `out` is writable.
 */
enum EqhStatus eqh_surface_invariants(const struct EqhSurface *surface,
                                      struct EqhInvariants *out_inv);

/**
 * # Safety
 * `surface` is NULL or a handle not yet freed.
 */
void eqh_surface_free(struct EqhSurface *surface);

/**
 * The cover `y^m = f(t)` with `Z/m` acting on `y`.
 *
 * # Safety
 * `f` points to `f_len` NUL-terminated strings; `out_cover` is writable.
 */
enum EqhStatus eqh_cover_superelliptic(uint32_t m,
                                       const char *const *f,
                                       size_t f_len,
                                       struct EqhCover **out_cover);

/**
 * Builds the `[cover]` section of a TOML job file.
 *
 * # Safety
 * `toml` is a NUL-terminated string; `out_cover` is writable.
 */
enum EqhStatus eqh_cover_from_toml(const char *toml, struct EqhCover **out_cover);

/**
 * # Safety
 * `cover` is a live handle and `out_genus` is writable.
 */
enum EqhStatus eqh_cover_genus(const struct EqhCover *cover, uint32_t *out_genus);

/**
 * Multiplicities of `H^0(K)` over the irreducible characters. `len`
 * receives the number of characters; if `cap` is smaller nothing is copied
 * and `BufferTooSmall` is returned.
 *
 * # Safety
 * `buf` has room for `cap` values (may be NULL when `cap` is 0); `len` is
 * writable.
 */
enum EqhStatus eqh_cover_h0_canonical(const struct EqhCover *cover,
                                      int64_t *buf,
                                      size_t cap,
                                      size_t *len);

/**
 * # Safety
 * `cover` is NULL or a handle not yet freed.
 */
void eqh_cover_free(struct EqhCover *cover);

/**
 * Symbolic class of `H^{p,q}` for the zero locus of a section of
 * `O(d) (x) L^ell` on the projectivization of `sum O(degrees[i])`.
 *
 * # Safety
 * `degrees` points to `rank` values; `out_class` is writable.
 */
enum EqhStatus eqh_engine_hodge_class(const int64_t *degrees,
                                      size_t rank,
                                      int64_t ell,
                                      int64_t d,
                                      bool lefschetz,
                                      bool singular,
                                      size_t p,
                                      size_t q,
                                      struct EqhClass *out_class);

/**
 * Rank bounds after base change; `epsilon = 0` means `|G|`.
 *
 * # Safety
 * `surface` and `cover` are live handles; `out_bound` is writable.
 */
enum EqhStatus eqh_mw_bound(const struct EqhSurface *surface,
                            const struct EqhCover *cover,
                            uint32_t epsilon,
                            struct EqhMwBound *out_bound);

/**
 * Runs a CLI command (`"analyze"`, `"mwbound"`, ...) on a TOML job and
 * returns the JSON report, to be released with [`eqh_string_free`].
 *
 * # Safety
 * `command` and `toml` are NUL-terminated strings; `out_json` is writable.
 */
enum EqhStatus eqh_run_job(const char *command, const char *toml, bool full_check, char **out_json);

/**
 * # Safety
 * `s` is NULL or a string returned by this library and not yet freed.
 */
void eqh_string_free(char *s);

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *eqh_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQHODGE_H */
