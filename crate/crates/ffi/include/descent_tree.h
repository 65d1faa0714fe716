#ifndef DESCENT_TREE_H
#define DESCENT_TREE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DtStatus {
  DT_STATUS_OK = 0,
  DT_STATUS_NULL_POINTER = 1,
  DT_STATUS_INVALID_UTF8 = 2,
  DT_STATUS_PARSE = 3,
  DT_STATUS_INVALID_ARGUMENT = 4,
  DT_STATUS_CAP_EXCEEDED = 5,
  DT_STATUS_NOT_QUALIFYING = 6,
  DT_STATUS_NUMERIC = 7,
  DT_STATUS_INTERNAL = 8,
  DT_STATUS_PANIC = 9,
} DtStatus;

typedef enum DtFormat {
  DT_FORMAT_COMPACT = 0,
  DT_FORMAT_STRUCTURED = 1,
} DtFormat;

typedef enum DtAlgo {
  DT_ALGO_AUTO = 0,
  DT_ALGO_BRUTE = 1,
  DT_ALGO_CUT = 2,
  DT_ALGO_ASCENT_CUT = 3,
  DT_ALGO_EXPLICIT = 4,
  DT_ALGO_SHIFT = 5,
} DtAlgo;

/**
 * Opaque counting engine; owns the memo cache shared across calls.
 */
typedef struct DtEngine DtEngine;

/**
 * Opaque exact rational polynomial in `n`.
 */
typedef struct DtPoly DtPoly;

/**
 * Opaque rooted tree with a marked descent set.
 */
typedef struct DtTree DtTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *dt_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dt_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void dt_string_free(char *s);

/**
 * Engine whose brute-force route refuses trees larger than `brute_cap`.
 */
struct DtEngine *dt_engine_new(size_t brute_cap);

/**
 * # Safety
 * `e` must be null or a handle from [`dt_engine_new`], freed once.
 */
void dt_engine_free(struct DtEngine *e);

/**
 * Parses compact (`a[d,a]`) or structured JSON tree text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum DtStatus dt_tree_parse(const char *text, struct DtTree **out);

/**
 * # Safety
 * `t` must be null or a handle from [`dt_tree_parse`], freed once.
 */
void dt_tree_free(struct DtTree *t);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live tree handle.
 */
size_t dt_tree_size(const struct DtTree *t);

/**
 * Degree of the descent polynomial (sum of hooks of maximal descents).
 *
 * # Safety
 * `t` must be null or a live tree handle.
 */
size_t dt_tree_degree(const struct DtTree *t);

/**
 * # Safety
 * `t` must be a live tree handle and `out` writable.
 */
enum DtStatus dt_tree_to_string(const struct DtTree *t, enum DtFormat format, char **out);

/**
 * Number of natural labelings, as a decimal string.
 *
 * # Safety
 * `t` must be a live tree handle and `out` writable.
 */
enum DtStatus dt_tree_natlab(const struct DtTree *t, char **out);

/**
 * Exact count d(T; n) as a decimal string. `engine` may be null.
 *
 * # Safety
 * `t` must be a live tree handle, `engine` null or live, `out` writable.
 */
enum DtStatus dt_tree_count(const struct DtEngine *engine,
                            const struct DtTree *t,
                            size_t n,
                            enum DtAlgo algo,
                            char **out);

/**
 * Descent polynomial of `t`. `engine` may be null.
 *
 * # Safety
 * `t` must be a live tree handle, `engine` null or live, `out` writable.
 */
enum DtStatus dt_tree_polynomial(const struct DtEngine *engine,
                                 const struct DtTree *t,
                                 enum DtAlgo algo,
                                 struct DtPoly **out);

/**
 * Expansion in the named basis (`a`, `abar`, `c`, `c:<offset>`, `nk`) as
 * JSON. `engine` may be null.
 *
 * # Safety
 * `t` must be a live tree handle, `basis` a NUL-terminated string,
 * `engine` null or live, `out` writable.
 */
enum DtStatus dt_tree_expand(const struct DtEngine *engine,
                             const struct DtTree *t,
                             const char *basis,
                             char **out);

/**
 * Root report (integer roots, predictions and verdicts) as JSON.
 *
 * # Safety
 * `t` must be a live tree handle, `engine` null or live, `out` writable.
 */
enum DtStatus dt_tree_roots(const struct DtEngine *engine, const struct DtTree *t, char **out);

/**
 * # Safety
 * `p` must be null or a handle from [`dt_tree_polynomial`] or
 * [`dt_poly_from_json`], freed once.
 */
void dt_poly_free(struct DtPoly *p);

/**
 * Degree, or -1 for the zero polynomial or a null handle.
 *
 * # Safety
 * `p` must be null or a live polynomial handle.
 */
int64_t dt_poly_degree(const struct DtPoly *p);

/**
 * Human-readable form, e.g. `1/3·n^3 − n^2 + 80`.
 *
 * # Safety
 * `p` must be a live polynomial handle and `out` writable.
 */
enum DtStatus dt_poly_to_string(const struct DtPoly *p, char **out);

/**
 * Ascending `[numerator, denominator]` pairs as JSON.
 *
 * # Safety
 * `p` must be a live polynomial handle and `out` writable.
 */
enum DtStatus dt_poly_to_json(const struct DtPoly *p, char **out);

/**
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum DtStatus dt_poly_from_json(const char *text, struct DtPoly **out);

/**
 * Value at integer `n` as a reduced fraction string (`p/q` or `p`).
 *
 * # Safety
 * `p` must be a live polynomial handle and `out` writable.
 */
enum DtStatus dt_poly_eval(const struct DtPoly *p, int64_t n, char **out);

/**
 * Distinct integer roots in ascending order. Writes the total count to
 * `len` and at most `cap` roots to `roots`, which may be null when `cap`
 * is 0; call once with `cap = 0` to size the buffer.
 *
 * # Safety
 * `p` must be a live polynomial handle, `roots` valid for `cap` writes,
 * `len` writable.
 */
enum DtStatus dt_poly_integer_roots(const struct DtPoly *p,
                                    int64_t *roots,
                                    size_t cap,
                                    size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DESCENT_TREE_H */
