#ifndef RAINBOW_H
#define RAINBOW_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum RbHamiltonian {
  RB_HAMILTONIAN_EXISTS = 0,
  RB_HAMILTONIAN_NOT_EXISTS = 1,
  RB_HAMILTONIAN_UNKNOWN = 2,
} RbHamiltonian;

typedef enum RbMethod {
  RB_METHOD_GREEDY = 0,
  RB_METHOD_MAXIMALIZE = 1,
  RB_METHOD_LADDER = 2,
  RB_METHOD_NAIVE = 3,
  RB_METHOD_EXACT = 4,
} RbMethod;

/**
 * Result code of every call.
 */
typedef enum RbStatus {
  RB_STATUS_OK = 0,
  RB_STATUS_NULL_POINTER = 1,
  RB_STATUS_INVALID_ARGUMENT = 2,
  RB_STATUS_PARSE = 3,
  RB_STATUS_SIZE_CAP = 4,
  RB_STATUS_BOUND_VIOLATED = 5,
  RB_STATUS_BUDGET_EXHAUSTED = 6,
  RB_STATUS_PANIC = 7,
} RbStatus;

/**
 * A properly edge-colored complete graph.
 */
typedef struct RbGraph RbGraph;

/**
 * The result of a solver run.
 */
typedef struct RbReport RbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *rb_last_error(void);

/**
 * XOR coloring on `2^m` vertices.
 */
enum RbStatus rb_graph_mm(uint32_t m, struct RbGraph **out);

/**
 * Round-robin coloring on an even number of vertices.
 */
enum RbStatus rb_graph_round_robin(size_t n, struct RbGraph **out);

enum RbStatus rb_graph_random(size_t n, uint64_t seed, struct RbGraph **out);

/**
 * Parses the edge-list text format.
 */
enum RbStatus rb_graph_from_text(const char *text, struct RbGraph **out);

/**
 * Writes the edge-list text format. Free the result with [`rb_string_free`].
 */
enum RbStatus rb_graph_to_text(const struct RbGraph *g, char **out);

void rb_graph_free(struct RbGraph *g);

enum RbStatus rb_graph_n(const struct RbGraph *g, size_t *out);

enum RbStatus rb_graph_palette_len(const struct RbGraph *g, size_t *out);

/**
 * Color of edge `uv` (`u != v`).
 */
enum RbStatus rb_graph_color(const struct RbGraph *g, size_t u, size_t v, uint32_t *out);

/**
 * Runs a solver. `start` is used by greedy, maximalize and naive. For
 * `Ladder` the report is the last rung. For `Exact`, a nonzero
 * `node_budget` caps the search; an incomplete search still returns a
 * report and the status `BudgetExhausted`.
 */
enum RbStatus rb_solve(const struct RbGraph *g,
                       enum RbMethod method,
                       uint32_t k,
                       size_t start,
                       uint64_t node_budget,
                       struct RbReport **out);

void rb_report_free(struct RbReport *r);

/**
 * Number of vertices on the reported path.
 */
enum RbStatus rb_report_len(const struct RbReport *r, size_t *out);

/**
 * Copies up to `cap` path vertices into `buf`; `written` receives the
 * full length. Pass a null `buf` to query the length only.
 */
enum RbStatus rb_report_vertices(const struct RbReport *r,
                                 size_t *buf,
                                 size_t cap,
                                 size_t *written);

/**
 * The guaranteed bound as a reduced fraction.
 */
enum RbStatus rb_report_bound(const struct RbReport *r, int64_t *num, int64_t *den);

/**
 * The report as JSON. The string is owned by the report.
 */
const char *rb_report_json(const struct RbReport *r);

void rb_string_free(char *s);

/**
 * Exact Hamiltonian rainbow path check. `node_budget` of zero means
 * unlimited, which is refused above the default vertex cap.
 */
enum RbStatus rb_has_hamiltonian_rainbow_path(const struct RbGraph *g,
                                              uint64_t node_budget,
                                              enum RbHamiltonian *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAINBOW_H */
