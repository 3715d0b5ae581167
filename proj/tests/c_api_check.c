/* Consumes the public header from plain C99: builds a small graph, checks a
 * hand-computable operator value, runs the eigensolver, and releases every
 * handle. Prints a diagnostic and exits nonzero on the first failure. */
#include <plab.h>

#include <math.h>
#include <stdio.h>
#include <string.h>

static int fail(const char* what) {
  fprintf(stderr, "c_api_check: %s (last error: %s)\n", what,
          plab_last_error());
  return 1;
}

int main(void) {
  plab_graph* g = NULL;
  plab_domain* d = NULL;
  plab_eigenpair* e = NULL;

  if (plab_version() == NULL || strlen(plab_version()) == 0)
    return fail("version string is empty");

  /* Degenerate sizes are reported, not crashed on. */
  if (plab_graph_path(1, &g) == PLAB_OK) return fail("path(1) was accepted");
  if (strlen(plab_last_error()) == 0) return fail("no error message recorded");
  if (g != NULL) return fail("failed construction must not yield a handle");

  if (plab_graph_path(3, &g) != PLAB_OK) return fail("path(3) construction");
  if (plab_graph_vertex_count(g) != 3) return fail("vertex count");
  if (plab_graph_edge_count(g) != 2) return fail("edge count");
  if (strcmp(plab_graph_vertex_id(g, 1), "v1") != 0) return fail("vertex id");
  if (fabs(plab_graph_measure(g, 1) - 2.0) > 1e-12) return fail("measure");

  size_t interior[1];
  if (plab_graph_vertex_index(g, "v1", &interior[0]) != PLAB_OK)
    return fail("vertex lookup");
  if (plab_domain_create(g, interior, 1, &d) != PLAB_OK)
    return fail("domain construction");
  if (plab_domain_interior_count(d) != 1) return fail("interior count");
  if (plab_domain_boundary_count(d) != 2) return fail("boundary count");
  if (strcmp(plab_domain_interior_id(d, 0), "v1") != 0)
    return fail("interior id");

  /* One interior vertex with both neighbors clamped to zero: the operator
   * at u = 1 averages two unit drops, giving exactly -1 for any exponent. */
  double u = 1.0;
  double lap = 0.0;
  if (plab_p_laplacian(d, 3.0, &u, &lap, 1) != PLAB_OK)
    return fail("operator evaluation");
  if (fabs(lap + 1.0) > 1e-12) return fail("operator value at the center");

  plab_eigen_options eo;
  plab_eigen_options_default(&eo);
  if (plab_first_eigenpair(d, 3.0, &eo, &e) != PLAB_OK)
    return fail("eigensolve");
  if (fabs(plab_eigenpair_lambda(e) - 1.0) > 1e-8) return fail("eigenvalue");
  double phi = 0.0;
  if (plab_eigenpair_phi(e, &phi, 1) != PLAB_OK)
    return fail("eigenfunction copy");
  if (fabs(phi - 1.0) > 1e-8) return fail("eigenfunction value");
  if (plab_eigenpair_residual(e) > 1e-8) return fail("eigen residual");

  if (plab_status_name(PLAB_OK) == NULL) return fail("status name");

  plab_eigenpair_free(e);
  plab_domain_free(d);
  plab_graph_free(g);
  /* The free functions accept NULL. */
  plab_eigenpair_free(NULL);
  plab_domain_free(NULL);
  plab_graph_free(NULL);
  return 0;
}
