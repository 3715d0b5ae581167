/* C interface to the p-Laplacian blow-up laboratory.
 *
 * Conventions:
 *   - Every fallible call returns a plab_status; PLAB_OK is 0. On failure a
 *     human-readable message is stored per thread and retrievable through
 *     plab_last_error() until the next failing call on the same thread.
 *   - Objects are opaque handles created into an out-parameter and released
 *     with the matching *_free function (safe on NULL).
 *   - Plain accessors assume a valid handle and cannot fail; out-of-range
 *     indices on indexed accessors are reported where a status is returned.
 *   - Vertices are addressed by their index in the graph's sorted id order;
 *     interior slots by their index in the domain's sorted interior order.
 */
#ifndef PLAB_H
#define PLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plab_status {
  PLAB_OK = 0,
  PLAB_INVALID_ARGUMENT,
  PLAB_NON_FINITE_VALUE,
  PLAB_ASYMMETRIC_INPUT,
  PLAB_NONPOSITIVE_WEIGHT,
  PLAB_SELF_LOOP,
  PLAB_ISOLATED_VERTEX,
  PLAB_UNKNOWN_VERTEX,
  PLAB_EMPTY_INTERIOR,
  PLAB_DEGENERATE_SIZE,
  PLAB_DISCONNECTED_AFTER_RETRIES,
  PLAB_EDGE_LIST_PARSE,
  PLAB_MISSING_NEIGHBOR_VALUE,
  PLAB_SUPPORT_MISMATCH,
  PLAB_MISSING_BOUNDARY_DATA,
  PLAB_ZERO_DENOMINATOR,
  PLAB_NOT_CONNECTED,
  PLAB_EMPTY_BOUNDARY,
  PLAB_NO_CONVERGENCE,
  PLAB_NONZERO_BOUNDARY_DATA,
  PLAB_NO_CONTRACTION,
  PLAB_MAX_SWEEPS_EXCEEDED,
  PLAB_STEP_UNDERFLOW_WITHOUT_GROWTH,
  PLAB_NONPOSITIVE_DENOMINATOR,
  PLAB_QUADRATURE_FAILURE,
  PLAB_DOMAIN_MISMATCH,
  PLAB_BELOW_EQUILIBRIUM,
  PLAB_HYPOTHESIS_VIOLATED,
  PLAB_CONFIG_PARSE,
  PLAB_UNKNOWN = 255
} plab_status;

/* Library version, "major.minor.patch". */
const char* plab_version(void);

/* Stable name of a status code, e.g. "HypothesisViolated". */
const char* plab_status_name(plab_status status);

/* Message of the most recent failure on the calling thread ("" if none). */
const char* plab_last_error(void);

/* ------------------------------------------------------------------ graph */

typedef struct plab_graph plab_graph;

/* Edge-list text: one "<id> <id> <weight>" per line, '#' comments. */
plab_status plab_graph_parse(const char* text, plab_graph** out);
plab_status plab_graph_load(const char* path, plab_graph** out);
plab_status plab_graph_path(size_t vertices, plab_graph** out);
plab_status plab_graph_star(size_t leaves, plab_graph** out);
plab_status plab_graph_grid(size_t rows, size_t cols, plab_graph** out);
plab_status plab_graph_random(size_t vertices, double edge_prob, uint64_t seed,
                              plab_graph** out);
void plab_graph_free(plab_graph* g);

size_t plab_graph_vertex_count(const plab_graph* g);
size_t plab_graph_edge_count(const plab_graph* g);
const char* plab_graph_vertex_id(const plab_graph* g, size_t vertex);
plab_status plab_graph_vertex_index(const plab_graph* g, const char* id,
                                    size_t* out);
double plab_graph_measure(const plab_graph* g, size_t vertex);
size_t plab_graph_degree(const plab_graph* g, size_t vertex);

/* ----------------------------------------------------------------- domain */

typedef struct plab_domain plab_domain;

/* Interior given as graph vertex indices; boundary and zero data derived. */
plab_status plab_domain_create(const plab_graph* g, const size_t* interior,
                               size_t interior_len, plab_domain** out);
/* Interior = all vertices of maximum degree (path interior, star center,
 * inner lattice of a grid). */
plab_status plab_domain_max_degree(const plab_graph* g, plab_domain** out);
/* Interior = every vertex; the unrestricted problem on the whole graph. */
plab_status plab_domain_whole(const plab_graph* g, plab_domain** out);
void plab_domain_free(plab_domain* d);

size_t plab_domain_interior_count(const plab_domain* d);
size_t plab_domain_boundary_count(const plab_domain* d);
/* Graph vertex index of interior slot `slot`. */
size_t plab_domain_interior_vertex(const plab_domain* d, size_t slot);
const char* plab_domain_interior_id(const plab_domain* d, size_t slot);

/* --------------------------------------------------------------- operator */

/* out[slot] = Delta_p restricted to the interior, zero boundary data.
 * values/out have one entry per interior slot (len must match). */
plab_status plab_p_laplacian(const plab_domain* d, double p,
                             const double* values, double* out, size_t len);

/* Rayleigh quotient of `values` (interior, zero-extended). */
plab_status plab_rayleigh(const plab_domain* d, double p, const double* values,
                          size_t len, double* out);

/* ----------------------------------------------------------------- eigen */

typedef struct plab_eigen_options {
  size_t max_iterations;     /* 200000 */
  double residual_tolerance; /* 1e-8 */
  double lambda_rel_change;  /* 1e-10 */
  uint64_t seed;             /* 1 */
} plab_eigen_options;

void plab_eigen_options_default(plab_eigen_options* opts);

typedef struct plab_eigenpair plab_eigenpair;

plab_status plab_first_eigenpair(const plab_domain* d, double p,
                                 const plab_eigen_options* opts,
                                 plab_eigenpair** out);
void plab_eigenpair_free(plab_eigenpair* e);

double plab_eigenpair_lambda(const plab_eigenpair* e);
double plab_eigenpair_residual(const plab_eigenpair* e);
double plab_eigenpair_phi_min(const plab_eigenpair* e);
double plab_eigenpair_phi_sup(const plab_eigenpair* e);
/* Copies the sup-normalized eigenfunction (one entry per interior slot). */
plab_status plab_eigenpair_phi(const plab_eigenpair* e, double* out, size_t len);

/* -------------------------------------------------------------- scenarios */

/* Source coefficient sigma(x, t); x is a graph vertex index. */
typedef double (*plab_sigma_fn)(void* ctx, size_t vertex, double t);
/* Reaction term f(s); must satisfy f(0) = 0. */
typedef double (*plab_reaction_fn)(void* ctx, double s);

typedef struct plab_integrate_options {
  double horizon;          /* <= 0: twice the scenario's theoretical bound */
  double initial_step;     /* <= 0: horizon / 1024 */
  double min_step;         /* <= 0: 1e-12 * horizon */
  double max_step;         /* <= 0: horizon */
  double blowup_threshold; /* 1e8 */
  double rel_tol;          /* 1e-9 */
  double abs_tol;          /* 1e-12 */
} plab_integrate_options;

void plab_integrate_options_default(plab_integrate_options* opts);

typedef struct plab_scenario_options {
  plab_integrate_options integrator;
  plab_eigen_options eigen;
  int run_full_graph;   /* strong-reaction scenario only; default 1 */
  int equality_remark;  /* tag the run as the equality-case variant */
} plab_scenario_options;

void plab_scenario_options_default(plab_scenario_options* opts);

typedef struct plab_scenario plab_scenario;

/* Strong reaction f(s) = (1/delta + eps)|s|^{p-2} s: integrates the
 * zero-boundary problem, checks detection against the bound F(max u0), and
 * (optionally) that the whole-graph solution dominates. u0 has one entry per
 * graph vertex. */
plab_status plab_scenario_strong_reaction(const plab_domain* d, double p,
                                          double eps, double delta,
                                          plab_sigma_fn sigma, void* sigma_ctx,
                                          const double* u0, size_t u0_len,
                                          const plab_scenario_options* opts,
                                          plab_scenario** out);

/* Power reaction f(s) = C|s|^{q-1} s with 1 < q <= p-1: requires the initial
 * minimum above the eigenpair threshold, builds the separable subsolution
 * certificate, integrates, and checks the ordering. */
plab_status plab_scenario_power_reaction(const plab_domain* d, double p,
                                         double q, double C, double delta,
                                         plab_sigma_fn sigma, void* sigma_ctx,
                                         const double* u0, size_t u0_len,
                                         const plab_scenario_options* opts,
                                         plab_scenario** out);

/* Plain zero-boundary run with a caller-supplied reaction: no theorem
 * verdict, the result reports the run itself (tag "raw-integrate",
 * as-predicted trivially true). u0 has one entry per interior slot; delta is
 * the declared lower bound of sigma. Passing has_power_hint nonzero declares
 * f(s) ~ C s^q, sharpening the blow-up-time extrapolation and enabling the
 * theoretical bound. horizon must be positive here. */
plab_status plab_integrate(const plab_domain* d, double p, plab_sigma_fn sigma,
                           void* sigma_ctx, double delta, plab_reaction_fn f,
                           void* f_ctx, const double* u0, size_t u0_len,
                           int has_power_hint, double q_hint, double C_hint,
                           const plab_integrate_options* opts,
                           plab_scenario** out);

void plab_scenario_free(plab_scenario* s);

const char* plab_scenario_tag(const plab_scenario* s);
int plab_scenario_as_predicted(const plab_scenario* s);
size_t plab_scenario_failure_count(const plab_scenario* s);
const char* plab_scenario_failure(const plab_scenario* s, size_t i);
/* NaN when the scenario needs no eigenpair. */
double plab_scenario_lambda1(const plab_scenario* s);

int plab_scenario_detected(const plab_scenario* s);
/* NULL when no blow-up was detected. */
const char* plab_scenario_blowup_vertex(const plab_scenario* s);
double plab_scenario_threshold_time(const plab_scenario* s);
double plab_scenario_extrapolated_time(const plab_scenario* s);
double plab_scenario_fit_residual(const plab_scenario* s);
double plab_scenario_time_uncertainty(const plab_scenario* s);
int plab_scenario_has_bound(const plab_scenario* s);
double plab_scenario_bound(const plab_scenario* s);

/* Trajectory of the zero-boundary run: rows are accepted time steps, columns
 * the sorted interior ids. */
size_t plab_scenario_rows(const plab_scenario* s);
size_t plab_scenario_columns(const plab_scenario* s);
const char* plab_scenario_column_id(const plab_scenario* s, size_t col);
double plab_scenario_time(const plab_scenario* s, size_t row);
plab_status plab_scenario_state(const plab_scenario* s, size_t row, double* out,
                                size_t len);
size_t plab_scenario_steps_accepted(const plab_scenario* s);
size_t plab_scenario_steps_rejected(const plab_scenario* s);

/* Certificate of the power-reaction scenario; *_has_* guards the accessors. */
int plab_scenario_has_certificate(const plab_scenario* s);
/* "" when the certificate was built; otherwise why it was rejected. */
const char* plab_scenario_certificate_error(const plab_scenario* s);
double plab_scenario_cert_a(const plab_scenario* s);
double plab_scenario_cert_b(const plab_scenario* s);
double plab_scenario_cert_eps(const plab_scenario* s);
double plab_scenario_cert_h0(const plab_scenario* s);
double plab_scenario_cert_equilibrium(const plab_scenario* s);
double plab_scenario_cert_threshold(const plab_scenario* s);
double plab_scenario_cert_blowup_time(const plab_scenario* s);
double plab_scenario_cert_residual_max(const plab_scenario* s);
double plab_scenario_cert_residual_scale(const plab_scenario* s);

int plab_scenario_has_comparison(const plab_scenario* s);
int plab_scenario_comparison_holds(const plab_scenario* s);
double plab_scenario_comparison_min_gap(const plab_scenario* s);

/* ------------------------------------------------------------------ bound */

/* F(x) = integral from x to infinity of ds / (delta f(s) - s^{p-1}) for the
 * strong reaction f(s) = (1/delta + eps) s^{p-1}. */
plab_status plab_blowup_bound_strong(double p, double eps, double delta,
                                     double x_lower, double* out);

#ifdef __cplusplus
}
#endif

#endif /* PLAB_H */
