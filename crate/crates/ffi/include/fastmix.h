#ifndef FASTMIX_H
#define FASTMIX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Passed as `root` to let the library choose a center vertex.
#define FM_DEFAULT_ROOT SIZE_MAX



typedef enum FmStatus {
  FM_STATUS_OK = 0,
  FM_STATUS_NULL_POINTER = 1,
  FM_STATUS_INVALID_ARGUMENT = 2,
  FM_STATUS_PARSE = 3,
  FM_STATUS_DISCONNECTED = 4,
  FM_STATUS_DOMAIN = 5,
  FM_STATUS_TOO_LARGE = 6,
  // An output buffer is shorter than required.
  FM_STATUS_BUFFER_TOO_SMALL = 7,
  FM_STATUS_NUMERICAL = 8,
  FM_STATUS_PANIC = 9,
} FmStatus;

typedef enum FmMeasure {
  FM_MEASURE_EDGE = 0,
  FM_MEASURE_VERTEX = 1,
  FM_MEASURE_MATCHING = 2,
} FmMeasure;

// A reversible transition matrix with its stationary distribution.
typedef struct FmChain FmChain;

typedef struct FmGraph FmGraph;

typedef struct FmSchedule FmSchedule;

// Conductance as the fraction `num / den`.
typedef struct FmConductance {
  int64_t num;
  int64_t den;
  double value;
  // True when the set is a proven minimiser.
  bool exact;
  size_t set_len;
} FmConductance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library from the same thread.
const char *fm_last_error(void);

// Library version as a static string.
const char *fm_version(void);

// Graph on `n` vertices from `m` edges stored as `2m` endpoint ids.
//
// # Safety
// `edges` must point to `2 * m` readable values and `out` must be writable.
enum FmStatus fm_graph_new(size_t n, const size_t *edges, size_t m, struct FmGraph **out);

// Graph from the edge-list text format.
//
// # Safety
// `text` must be a nul-terminated string and `out` must be writable.
enum FmStatus fm_graph_parse(const char *text_in, struct FmGraph **out);

// Member of a named family. `binary_tree` reads its depth from `n`;
// `clique_source` needs `k > 0`, other families ignore `k`.
//
// # Safety
// `family` must be a nul-terminated string and `out` must be writable.
enum FmStatus fm_graph_generate(const char *family, size_t n, size_t k, struct FmGraph **out);

// # Safety
// `g` must be null or a handle from this library not yet freed.
void fm_graph_free(struct FmGraph *g);

// Vertex count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t fm_graph_vertex_count(const struct FmGraph *g);

// Edge count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t fm_graph_edge_count(const struct FmGraph *g);

// Copies the edges as `2m` endpoint ids in the library's edge order.
//
// # Safety
// `buf` must point to `len` writable values.
enum FmStatus fm_graph_edges(const struct FmGraph *g, size_t *buf, size_t len);

// # Safety
// `g` must be a live handle and `out` writable.
enum FmStatus fm_graph_diameter(const struct FmGraph *g, size_t *out);

// Global conductance of `which`, exact up to the enumeration limits and a
// heuristic certificate beyond them. When `set` is non-null the minimising
// set is copied into it; `set_cap` must then be at least `out->set_len`.
//
// # Safety
// `g` must be a live handle, `out` writable, and `set` null or `set_cap`
// writable values.
enum FmStatus fm_conductance(const struct FmGraph *g,
                             enum FmMeasure which,
                             struct FmConductance *out,
                             size_t *set,
                             size_t set_cap);

// Lazy chain with stationary distribution `pi` (null for uniform; positive
// weights, rescaled) whose gap is at least `epsilon / (48 diam²)`.
//
// # Safety
// `g` must be a live handle, `pi` null or `n` readable values, `out`
// writable.
enum FmStatus fm_build_almost_mix(const struct FmGraph *g,
                                  const double *pi,
                                  double epsilon,
                                  size_t root,
                                  struct FmChain **out);

// # Safety
// `c` must be null or a live chain handle.
void fm_chain_free(struct FmChain *c);

// Number of states, or 0 for a null handle.
//
// # Safety
// `c` must be null or a live handle.
size_t fm_chain_size(const struct FmChain *c);

// Spectral gap of the chain, or NaN for a null handle.
//
// # Safety
// `c` must be null or a live handle.
double fm_chain_gap(const struct FmChain *c);

// Copies the transition matrix row-major into `buf` (`n²` values) and, if
// `pi` is non-null, the stationary distribution (`n` values).
//
// # Safety
// `buf` must hold `len` writable values and `pi` be null or `n` writable.
enum FmStatus fm_chain_matrix(const struct FmChain *c, double *buf, size_t len, double *pi);

// Continuous-time tree rates, one per edge in [`fm_graph_edges`] order
// (zero off the tree). `max_hitting` receives the largest expected hitting
// time of the root; it may be null.
//
// # Safety
// `g` must be a live handle, `rates` hold `len` writable values and
// `max_hitting` be null or writable.
enum FmStatus fm_build_continuous(const struct FmGraph *g,
                                  size_t root,
                                  double *rates,
                                  size_t len,
                                  double *max_hitting);

// Finite schedule of chains that maps every start to `pi` exactly.
//
// # Safety
// `g` must be a live handle, `pi` null or `n` readable values, `out`
// writable.
enum FmStatus fm_build_schedule(const struct FmGraph *g,
                                const double *pi,
                                size_t root,
                                struct FmSchedule **out);

// # Safety
// `s` must be null or a live schedule handle.
void fm_schedule_free(struct FmSchedule *s);

// Number of steps, or 0 for a null handle.
//
// # Safety
// `s` must be null or a live handle.
size_t fm_schedule_len(const struct FmSchedule *s);

// Copies step `k` row-major into `buf` (`n²` values).
//
// # Safety
// `buf` must hold `len` writable values.
enum FmStatus fm_schedule_step(const struct FmSchedule *s, size_t k, double *buf, size_t len);

// Largest total-variation distance to the target after the whole schedule.
//
// # Safety
// `s` must be a live handle and `out` writable.
enum FmStatus fm_schedule_worst_tv(const struct FmSchedule *s, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FASTMIX_H */
