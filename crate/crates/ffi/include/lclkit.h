#ifndef LCLKIT_H
#define LCLKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result code of every fallible call.
 */
typedef enum LclkitStatus {
  LCLKIT_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  LCLKIT_STATUS_NULL_POINTER = 1,
  LCLKIT_STATUS_INVALID_UTF8 = 2,
  /*
   JSON that does not parse or violates the schema or graph invariants.
   */
  LCLKIT_STATUS_MALFORMED_INPUT = 3,
  /*
   Well-formed input the operation does not accept (unknown problem,
   unencodable graph, empty palette, ...).
   */
  LCLKIT_STATUS_INVALID_ARGUMENT = 4,
  /*
   `lclkit_gadget_decode` input is not an encoded graph.
   */
  LCLKIT_STATUS_NOT_IN_IMAGE = 5,
  /*
   A panic was caught at the boundary.
   */
  LCLKIT_STATUS_INTERNAL = 6,
} LclkitStatus;

typedef enum LclkitMode {
  LCLKIT_MODE_STRICT = 0,
  /*
   Check the truncation interior only; see `lclkit_verify`.
   */
  LCLKIT_MODE_LENIENT = 1,
} LclkitMode;

/*
 Opaque pruned tree automaton.
 */
typedef struct LclkitAutomaton LclkitAutomaton;

/*
 Opaque structured graph.
 */
typedef struct LclkitGraph LclkitGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *lclkit_version(void);

/*
 Message describing the last failed call on this thread, or null. The
 pointer stays valid until the next `lclkit_*` call on this thread.
 */
const char *lclkit_last_error(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from an `lclkit_*` out parameter and not be freed twice.
 */
void lclkit_string_free(char *s);

/*
 Parses graph JSON and validates the basic invariants.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LclkitStatus lclkit_graph_from_json(const char *json, struct LclkitGraph **out);

/*
 Serializes a graph as pretty-printed JSON.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum LclkitStatus lclkit_graph_to_json(const struct LclkitGraph *g, char **out);

/*
 Number of vertices; 0 for a null handle.

 # Safety
 `g` must be null or a live handle.
 */
size_t lclkit_graph_vertex_count(const struct LclkitGraph *g);

/*
 # Safety
 `g` must be null or a handle not yet freed.
 */
void lclkit_graph_free(struct LclkitGraph *g);

/*
 Parses automaton JSON; the automaton must be pruned.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LclkitStatus lclkit_automaton_from_json(const char *json, struct LclkitAutomaton **out);

/*
 # Safety
 `a` must be null or a handle not yet freed.
 */
void lclkit_automaton_free(struct LclkitAutomaton *a);

/*
 Writes `{"kind":"in_f"}` or `{"kind":"not_in_f","stem":..,"cycle":..}`.

 # Safety
 `a` must be a live handle; `out` must be writable.
 */
enum LclkitStatus lclkit_automaton_decide_f(const struct LclkitAutomaton *a, char **out);

/*
 The tree of the automaton cut at `depth`.

 # Safety
 `a` must be a live handle; `out` must be writable.
 */
enum LclkitStatus lclkit_automaton_truncate(const struct LclkitAutomaton *a,
                                            size_t depth,
                                            struct LclkitGraph **out);

/*
 Builds the anchored component described by `{"a0":..,"a1":..,"depth":d}`.

 # Safety
 `spec_json` must be a NUL-terminated string; `out` must be writable.
 */
enum LclkitStatus lclkit_component_build(const char *spec_json, struct LclkitGraph **out);

/*
 Replaces every edge by its gadget.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum LclkitStatus lclkit_gadget_encode(const struct LclkitGraph *g, struct LclkitGraph **out);

/*
 Recovers the structured graph from an encoding.

 # Safety
 `g` must be a live handle; `out` must be writable.
 */
enum LclkitStatus lclkit_gadget_decode(const struct LclkitGraph *g, struct LclkitGraph **out);

/*
 Verifies a coloring (`{"colors":{..}}`) and writes `{"ok":..,"failures":[..]}`.
 `problem` is `sigma`, `pi`, `pi-star` or `proper-k`; `palette` is the k of
 `proper-k` (0 otherwise). In lenient mode a negative `depth` means the
 deepest tree vertex.

 # Safety
 Pointers must be live handles or NUL-terminated strings; `out` writable.
 */
enum LclkitStatus lclkit_verify(const struct LclkitGraph *g,
                                const char *coloring_json,
                                const char *problem,
                                uint64_t palette,
                                enum LclkitMode mode,
                                int64_t depth,
                                char **out);

/*
 Solves with colors `0..palette` and writes `{"result":"unsat"}` or
 `{"result":"sat","colors":{..}}`. Other arguments as in `lclkit_verify`.

 # Safety
 Pointers must be live handles or NUL-terminated strings; `out` writable.
 */
enum LclkitStatus lclkit_solve(const struct LclkitGraph *g,
                               const char *problem,
                               uint64_t palette,
                               enum LclkitMode mode,
                               int64_t depth,
                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LCLKIT_H */
