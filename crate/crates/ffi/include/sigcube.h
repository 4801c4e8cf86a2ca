#ifndef SIGCUBE_H
#define SIGCUBE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. 1 to 4 match the exit codes of the `sigcube` tool.
 */
typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_PARAMETER = 1,
  SC_STATUS_LOAD = 2,
  SC_STATUS_QUERY_MISS = 3,
  SC_STATUS_VERIFICATION = 4,
  SC_STATUS_NULL_ARGUMENT = 5,
  SC_STATUS_PANIC = 6,
} ScStatus;

typedef struct ScCube ScCube;

typedef struct ScGraph ScGraph;

typedef struct ScTable ScTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *sc_last_error_message(void);

/**
 * Loads a graph from a vertex CSV and an edge CSV.
 *
 * # Safety
 * Paths must be nul-terminated strings; `out` must be writable.
 */
enum ScStatus sc_graph_load(const char *vertex_path, const char *edge_path, struct ScGraph **out);

/**
 * Seeded synthetic graph; see the `gen` command.
 *
 * # Safety
 * `out` must be writable.
 */
enum ScStatus sc_graph_generate(size_t vertices,
                                size_t edges,
                                size_t dims,
                                size_t cardinality,
                                uint64_t seed,
                                double hub_fraction,
                                struct ScGraph **out);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t sc_graph_vertex_count(const struct ScGraph *g);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t sc_graph_edge_count(const struct ScGraph *g);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t sc_graph_dim_count(const struct ScGraph *g);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void sc_graph_free(struct ScGraph *g);

/**
 * Significance table with keep flags under `policy` (`none`, `ss-mean` or
 * `support`). `min_support` is read only by `support`.
 *
 * # Safety
 * `g` must be a live graph handle, `policy` a nul-terminated string and
 * `out` writable.
 */
enum ScStatus sc_significance_compute(const struct ScGraph *g,
                                      const char *policy,
                                      size_t min_support,
                                      struct ScTable **out);

/**
 * Looks up one value. Any of the result pointers may be null.
 *
 * # Safety
 * Handles must be live; strings nul-terminated.
 */
enum ScStatus sc_table_lookup(const struct ScGraph *g,
                              const struct ScTable *t,
                              const char *dim,
                              const char *value,
                              double *ss,
                              size_t *support,
                              bool *keep);

/**
 * The table as `dimension,value,ss,support,keep` CSV. Free with
 * [`sc_string_free`].
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum ScStatus sc_table_csv(const struct ScGraph *g, const struct ScTable *t, char **out);

/**
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void sc_table_free(struct ScTable *t);

/**
 * Materializes every cuboid up to `max_level` (0 means all dimensions).
 * `strategy` is `level` or `steps`; `threads` 0 uses every core.
 *
 * # Safety
 * Handles must be live, `strategy` nul-terminated and `out` writable.
 */
enum ScStatus sc_cube_build(const struct ScGraph *g,
                            const struct ScTable *t,
                            const char *strategy,
                            size_t max_level,
                            size_t threads,
                            struct ScCube **out);

/**
 * # Safety
 * `c` must be null or a live cube handle.
 */
size_t sc_cube_node_count(const struct ScCube *c);

/**
 * # Safety
 * `c` must be null or a live cube handle.
 */
uint64_t sc_cube_combines(const struct ScCube *c);

/**
 * Writes the cube directory.
 *
 * # Safety
 * `c` must be live and `dir` nul-terminated.
 */
enum ScStatus sc_cube_write(const struct ScCube *c, const char *dir, bool keep_members);

/**
 * Renders one cuboid, named by comma-separated dimensions in any order, in
 * the stored file format with members. Free with [`sc_string_free`].
 *
 * # Safety
 * `c` must be live, `dims` nul-terminated and `out` writable.
 */
enum ScStatus sc_cube_query(const struct ScCube *c, const char *dims, char **out);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void sc_cube_free(struct ScCube *c);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void sc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIGCUBE_H */
