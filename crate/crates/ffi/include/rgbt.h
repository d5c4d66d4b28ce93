/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef RGBT_H
#define RGBT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RgbtStatus {
  RGBT_STATUS_OK = 0,
  RGBT_STATUS_NULL_ARGUMENT = 1,
  RGBT_STATUS_INVALID_UTF8 = 2,
  RGBT_STATUS_PARSE = 3,
  RGBT_STATUS_INVALID_GRAPH = 4,
  RGBT_STATUS_MISMATCH = 5,
  RGBT_STATUS_NOT_FOUND = 6,
  RGBT_STATUS_CAP_EXCEEDED = 7,
  RGBT_STATUS_FAILED = 8,
  RGBT_STATUS_PANIC = 9,
} RgbtStatus;

typedef struct RgbtGraph RgbtGraph;

typedef struct RgbtScenario RgbtScenario;

typedef struct RgbtTiling RgbtTiling;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or "" after a success.
 * The pointer stays valid until the next rgbt call on the same thread.
 */
const char *rgbt_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void rgbt_string_free(char *s);

/**
 * Parse a graph document (`{"n": 4, "rotation": [[1, 2, 3], ...]}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string, `out` a writable pointer.
 */
enum RgbtStatus rgbt_graph_from_json(const char *json, struct RgbtGraph **out);

/**
 * One of the builtin graphs: k4, octahedron, icosahedron, w5, triangle.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `out` a writable pointer.
 */
enum RgbtStatus rgbt_graph_builtin(const char *name, struct RgbtGraph **out);

/**
 * # Safety
 * `g` must come from this library and not have been freed.
 */
void rgbt_graph_free(struct RgbtGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle or NULL (which gives 0).
 */
size_t rgbt_graph_vertex_count(const struct RgbtGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle or NULL (which gives 0).
 */
size_t rgbt_graph_edge_count(const struct RgbtGraph *g);

/**
 * Endpoints of edge `index`, smaller vertex first. Tiling letters follow this edge order.
 *
 * # Safety
 * `g` must be a live graph handle, `u` and `v` writable pointers.
 */
enum RgbtStatus rgbt_graph_edge(const struct RgbtGraph *g, size_t index, size_t *u, size_t *v);

/**
 * Number of tilings in `mode` ("r", "g", "b", "rgb", "ergb"; NULL means "rgb").
 *
 * # Safety
 * `g` must be a live graph handle, `mode` NULL or a NUL-terminated string,
 * `count` a writable pointer.
 */
enum RgbtStatus rgbt_count_tilings(const struct RgbtGraph *g, const char *mode, uint64_t *count);

/**
 * The first tiling in enumeration order. `RGBT_STATUS_NOT_FOUND` if there is none.
 *
 * # Safety
 * `g` must be a live graph handle, `mode` NULL or a NUL-terminated string,
 * `out` a writable pointer.
 */
enum RgbtStatus rgbt_tiling_first(const struct RgbtGraph *g,
                                  const char *mode,
                                  struct RgbtTiling **out);

/**
 * A tiling from one letter per edge (r, g, b, k, Y) in edge order.
 *
 * # Safety
 * `g` must be a live graph handle, `letters` a NUL-terminated string,
 * `out` a writable pointer.
 */
enum RgbtStatus rgbt_tiling_from_letters(const struct RgbtGraph *g,
                                         const char *letters,
                                         struct RgbtTiling **out);

/**
 * # Safety
 * `t` must come from this library and not have been freed.
 */
void rgbt_tiling_free(struct RgbtTiling *t);

/**
 * Letter string of the tiling. Release with `rgbt_string_free`. NULL if `t` is NULL.
 *
 * # Safety
 * `t` must be a live tiling handle or NULL.
 */
char *rgbt_tiling_letters(const struct RgbtTiling *t);

/**
 * Whether `t` is a valid tiling of `g` in `mode`.
 *
 * # Safety
 * `g`, `t` must be live handles, `mode` NULL or a NUL-terminated string,
 * `valid` a writable pointer.
 */
enum RgbtStatus rgbt_tiling_check(const struct RgbtGraph *g,
                                  const struct RgbtTiling *t,
                                  const char *mode,
                                  bool *valid);

/**
 * Whether the red tiling `t` is grand.
 *
 * # Safety
 * `g`, `t` must be live handles, `grand` a writable pointer.
 */
enum RgbtStatus rgbt_tiling_is_grand(const struct RgbtGraph *g,
                                     const struct RgbtTiling *t,
                                     bool *grand);

/**
 * Number of closed canal rings of `t`. Rings are indexed 0..count.
 *
 * # Safety
 * `g`, `t` must be live handles, `count` a writable pointer.
 */
enum RgbtStatus rgbt_ring_count(const struct RgbtGraph *g,
                                const struct RgbtTiling *t,
                                size_t *count);

/**
 * Edge color switch along ring `index`, written to a new tiling handle.
 *
 * # Safety
 * `g`, `t` must be live handles, `out` a writable pointer.
 */
enum RgbtStatus rgbt_apply_ring(const struct RgbtGraph *g,
                                const struct RgbtTiling *t,
                                size_t index,
                                struct RgbtTiling **out);

/**
 * A builtin scenario name, or a scenario document when `source` starts with '{'.
 *
 * # Safety
 * `source` must be a NUL-terminated string, `out` a writable pointer.
 */
enum RgbtStatus rgbt_scenario_load(const char *source, struct RgbtScenario **out);

/**
 * # Safety
 * `sc` must come from this library and not have been freed.
 */
void rgbt_scenario_free(struct RgbtScenario *sc);

/**
 * Run the scenario script. `pass` receives the verdict. If `transcript` is not NULL it
 * receives the transcript as JSON, to be released with `rgbt_string_free`.
 *
 * # Safety
 * `sc` must be a live handle, `pass` a writable pointer, `transcript` NULL or writable.
 */
enum RgbtStatus rgbt_scenario_run(const struct RgbtScenario *sc, bool *pass, char **transcript);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RGBT_H */
