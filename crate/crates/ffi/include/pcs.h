#ifndef PCS_H
#define PCS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum PcsStatus {
  PCS_STATUS_OK = 0,
  PCS_STATUS_NULL_ARGUMENT = 1,
  PCS_STATUS_INVALID_UTF8 = 2,
  PCS_STATUS_PARSE = 3,
  PCS_STATUS_IO = 4,
  PCS_STATUS_OUT_OF_RANGE = 5,
  PCS_STATUS_FORMAT = 6,
  PCS_STATUS_INVALID_ARGUMENT = 7,
  PCS_STATUS_ORACLE_BOUND = 8,
  PCS_STATUS_PANIC = 9,
} PcsStatus;

typedef enum PcsAlgorithm {
  PCS_ALGORITHM_BASIC = 0,
  PCS_ALGORITHM_INCRE = 1,
  PCS_ALGORITHM_ADV_I = 2,
  PCS_ALGORITHM_ADV_D = 3,
  PCS_ALGORITHM_ADV_P = 4,
  PCS_ALGORITHM_ORACLE = 5,
} PcsAlgorithm;

// A profiled graph.
typedef struct PcsGraph PcsGraph;

// A CP-tree index.
typedef struct PcsIndex PcsIndex;

// The communities of one query.
typedef struct PcsResult PcsResult;

typedef struct PcsCounters {
  uint64_t subtrees_generated;
  uint64_t subtrees_verified;
  uint64_t gkt_computations;
  uint64_t candidate_volume;
} PcsCounters;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next failing call on this thread.
const char *pcs_last_error(void);

// Parses a graph from the three text sources (edges, P-trees, GP-tree).
//
// # Safety
// The strings must be nul-terminated; `out` must be writable.
enum PcsStatus pcs_graph_load(const char *edges,
                              const char *ptrees,
                              const char *gptree,
                              struct PcsGraph **out);

// Loads a graph from three files.
//
// # Safety
// The paths must be nul-terminated; `out` must be writable.
enum PcsStatus pcs_graph_load_files(const char *edges_path,
                                    const char *ptrees_path,
                                    const char *gptree_path,
                                    struct PcsGraph **out);

// The bundled six-vertex example graph (vertices A..F are 0..5).
//
// # Safety
// `out` must be writable.
enum PcsStatus pcs_graph_fixture(struct PcsGraph **out);

// # Safety
// `g` must be null or a live graph handle.
size_t pcs_graph_num_vertices(const struct PcsGraph *g);

// # Safety
// `g` must be null or a live graph handle.
size_t pcs_graph_num_edges(const struct PcsGraph *g);

// # Safety
// `g` must be null or a handle not yet freed.
void pcs_graph_free(struct PcsGraph *g);

// Builds the CP-tree index of `g`.
//
// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum PcsStatus pcs_index_build(const struct PcsGraph *g, struct PcsIndex **out);

// Writes `idx` to `path` in the `.cpt` format.
//
// # Safety
// `idx` must be a live index handle; `path` nul-terminated.
enum PcsStatus pcs_index_save(const struct PcsIndex *idx, const char *path);

// Reads a `.cpt` index file.
//
// # Safety
// `path` nul-terminated; `out` must be writable.
enum PcsStatus pcs_index_load(const char *path, struct PcsIndex **out);

// # Safety
// `idx` must be null or a live index handle.
size_t pcs_index_num_vertices(const struct PcsIndex *idx);

// # Safety
// `idx` must be null or a handle not yet freed.
void pcs_index_free(struct PcsIndex *idx);

// Runs one query. `basic` and `oracle` use `g` when given and otherwise
// the graph stored in `idx`; the other algorithms need only `idx`.
//
// # Safety
// `idx` must be a live index handle; `g` null or a live graph handle
// describing the same graph; `out` must be writable.
enum PcsStatus pcs_query(const struct PcsIndex *idx,
                         const struct PcsGraph *g,
                         uint32_t q,
                         uint32_t k,
                         enum PcsAlgorithm algorithm,
                         struct PcsResult **out);

// Number of communities in `r`.
//
// # Safety
// `r` must be null or a live result handle.
size_t pcs_result_len(const struct PcsResult *r);

// Sorted member ids of community `i`; `*len` receives their count. The
// array lives as long as `r`. Null when `i` is out of range.
//
// # Safety
// `r` must be a live result handle; `len` must be writable.
const uint32_t *pcs_result_vertices(const struct PcsResult *r, size_t i, size_t *len);

// Label ids of community `i`'s maximal common subtree, ascending; `*len`
// receives their count. Null when `i` is out of range.
//
// # Safety
// `r` must be a live result handle; `len` must be writable.
const uint32_t *pcs_result_mct(const struct PcsResult *r, size_t i, size_t *len);

// # Safety
// `r` must be a live result handle; `out` must be writable.
enum PcsStatus pcs_result_counters(const struct PcsResult *r, struct PcsCounters *out);

// # Safety
// `r` must be null or a handle not yet freed.
void pcs_result_free(struct PcsResult *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PCS_H */
