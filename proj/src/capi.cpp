#include "plab.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "plab/certificates.hpp"
#include "plab/dynamics.hpp"
#include "plab/graph.hpp"
#include "plab/operators.hpp"
#include "plab/spectral.hpp"

struct plab_graph {
  std::shared_ptr<const plab::WeightedGraph> g;
};

struct plab_domain {
  plab::DirichletDomain d;
};

struct plab_eigenpair {
  plab::EigenPair e;
};

struct plab_scenario {
  plab::ScenarioResult r;
};

namespace {

thread_local std::string t_last_error;

plab_status map_code(plab::ErrorCode code) {
  using plab::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return PLAB_INVALID_ARGUMENT;
    case ErrorCode::non_finite_value: return PLAB_NON_FINITE_VALUE;
    case ErrorCode::asymmetric_input: return PLAB_ASYMMETRIC_INPUT;
    case ErrorCode::nonpositive_weight: return PLAB_NONPOSITIVE_WEIGHT;
    case ErrorCode::self_loop: return PLAB_SELF_LOOP;
    case ErrorCode::isolated_vertex: return PLAB_ISOLATED_VERTEX;
    case ErrorCode::unknown_vertex: return PLAB_UNKNOWN_VERTEX;
    case ErrorCode::empty_interior: return PLAB_EMPTY_INTERIOR;
    case ErrorCode::degenerate_size: return PLAB_DEGENERATE_SIZE;
    case ErrorCode::disconnected_after_retries:
      return PLAB_DISCONNECTED_AFTER_RETRIES;
    case ErrorCode::edge_list_parse: return PLAB_EDGE_LIST_PARSE;
    case ErrorCode::missing_neighbor_value: return PLAB_MISSING_NEIGHBOR_VALUE;
    case ErrorCode::support_mismatch: return PLAB_SUPPORT_MISMATCH;
    case ErrorCode::missing_boundary_data: return PLAB_MISSING_BOUNDARY_DATA;
    case ErrorCode::zero_denominator: return PLAB_ZERO_DENOMINATOR;
    case ErrorCode::not_connected: return PLAB_NOT_CONNECTED;
    case ErrorCode::empty_boundary: return PLAB_EMPTY_BOUNDARY;
    case ErrorCode::no_convergence: return PLAB_NO_CONVERGENCE;
    case ErrorCode::nonzero_boundary_data: return PLAB_NONZERO_BOUNDARY_DATA;
    case ErrorCode::no_contraction: return PLAB_NO_CONTRACTION;
    case ErrorCode::max_sweeps_exceeded: return PLAB_MAX_SWEEPS_EXCEEDED;
    case ErrorCode::step_underflow_without_growth:
      return PLAB_STEP_UNDERFLOW_WITHOUT_GROWTH;
    case ErrorCode::nonpositive_denominator:
      return PLAB_NONPOSITIVE_DENOMINATOR;
    case ErrorCode::quadrature_failure: return PLAB_QUADRATURE_FAILURE;
    case ErrorCode::domain_mismatch: return PLAB_DOMAIN_MISMATCH;
    case ErrorCode::below_equilibrium: return PLAB_BELOW_EQUILIBRIUM;
    case ErrorCode::hypothesis_violated: return PLAB_HYPOTHESIS_VIOLATED;
    case ErrorCode::config_parse: return PLAB_CONFIG_PARSE;
  }
  return PLAB_UNKNOWN;
}

template <typename Fn>
plab_status guarded(Fn&& fn) {
  try {
    fn();
    return PLAB_OK;
  } catch (const plab::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return PLAB_UNKNOWN;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return PLAB_UNKNOWN;
  } catch (...) {
    t_last_error = "unknown failure";
    return PLAB_UNKNOWN;
  }
}

void require(bool cond, const char* message) {
  if (!cond) throw plab::Error(plab::ErrorCode::invalid_argument, message);
}

plab::SigmaFn wrap_sigma(plab_sigma_fn sigma, void* ctx) {
  require(sigma != nullptr, "sigma callback is null");
  return [sigma, ctx](std::size_t vertex, double t) {
    return sigma(ctx, vertex, t);
  };
}

plab::ReactionFn wrap_reaction(plab_reaction_fn f, void* ctx) {
  require(f != nullptr, "reaction callback is null");
  return [f, ctx](double s) { return f(ctx, s); };
}

plab::EigenOptions convert(const plab_eigen_options* opts) {
  plab::EigenOptions out;
  if (opts) {
    out.max_iterations = opts->max_iterations;
    out.residual_tolerance = opts->residual_tolerance;
    out.lambda_rel_change = opts->lambda_rel_change;
    out.seed = opts->seed;
  }
  return out;
}

plab::IntegrateOptions convert(const plab_integrate_options* opts) {
  plab::IntegrateOptions out;
  if (opts) {
    out.horizon = opts->horizon;
    out.initial_step = opts->initial_step;
    out.min_step = opts->min_step;
    out.max_step = opts->max_step;
    out.blowup_threshold = opts->blowup_threshold;
    out.rel_tol = opts->rel_tol;
    out.abs_tol = opts->abs_tol;
  }
  return out;
}

plab::ScenarioOptions convert(const plab_scenario_options* opts) {
  plab::ScenarioOptions out;
  if (opts) {
    out.integrator = convert(&opts->integrator);
    out.eigen = convert(&opts->eigen);
    out.run_full_graph = opts->run_full_graph != 0;
    out.equality_remark = opts->equality_remark != 0;
  }
  return out;
}

plab::VertexField field_on_graph(const plab_graph* g, const double* values,
                                 std::size_t len) {
  require(g != nullptr, "graph handle is null");
  require(values != nullptr, "value array is null");
  require(len == g->g->vertex_count(),
          "value array must have one entry per graph vertex");
  return plab::VertexField(g->g->vertex_ids(),
                           std::vector<double>(values, values + len));
}

void make_graph(plab_graph** out, plab::WeightedGraph&& g) {
  *out = new plab_graph{
      std::make_shared<const plab::WeightedGraph>(std::move(g))};
}

double cert_field(const plab_scenario* s,
                  double plab::SubsolutionCertificate::* member) {
  if (!s->r.certificate) return std::numeric_limits<double>::quiet_NaN();
  return (*s->r.certificate).*member;
}

}  // namespace

extern "C" {

const char* plab_version(void) { return "1.0.0"; }

const char* plab_status_name(plab_status status) {
  switch (status) {
    case PLAB_OK: return "Ok";
    case PLAB_INVALID_ARGUMENT: return "InvalidArgument";
    case PLAB_NON_FINITE_VALUE: return "NonFiniteValue";
    case PLAB_ASYMMETRIC_INPUT: return "AsymmetricInput";
    case PLAB_NONPOSITIVE_WEIGHT: return "NonpositiveWeight";
    case PLAB_SELF_LOOP: return "SelfLoop";
    case PLAB_ISOLATED_VERTEX: return "IsolatedVertex";
    case PLAB_UNKNOWN_VERTEX: return "UnknownVertex";
    case PLAB_EMPTY_INTERIOR: return "EmptyInterior";
    case PLAB_DEGENERATE_SIZE: return "DegenerateSize";
    case PLAB_DISCONNECTED_AFTER_RETRIES: return "DisconnectedAfterRetries";
    case PLAB_EDGE_LIST_PARSE: return "EdgeListParse";
    case PLAB_MISSING_NEIGHBOR_VALUE: return "MissingNeighborValue";
    case PLAB_SUPPORT_MISMATCH: return "SupportMismatch";
    case PLAB_MISSING_BOUNDARY_DATA: return "MissingBoundaryData";
    case PLAB_ZERO_DENOMINATOR: return "ZeroDenominator";
    case PLAB_NOT_CONNECTED: return "NotConnected";
    case PLAB_EMPTY_BOUNDARY: return "EmptyBoundary";
    case PLAB_NO_CONVERGENCE: return "NoConvergence";
    case PLAB_NONZERO_BOUNDARY_DATA: return "NonzeroBoundaryData";
    case PLAB_NO_CONTRACTION: return "NoContraction";
    case PLAB_MAX_SWEEPS_EXCEEDED: return "MaxSweepsExceeded";
    case PLAB_STEP_UNDERFLOW_WITHOUT_GROWTH:
      return "StepUnderflowWithoutGrowth";
    case PLAB_NONPOSITIVE_DENOMINATOR: return "NonpositiveDenominator";
    case PLAB_QUADRATURE_FAILURE: return "QuadratureFailure";
    case PLAB_DOMAIN_MISMATCH: return "DomainMismatch";
    case PLAB_BELOW_EQUILIBRIUM: return "BelowEquilibrium";
    case PLAB_HYPOTHESIS_VIOLATED: return "HypothesisViolated";
    case PLAB_CONFIG_PARSE: return "ConfigParse";
    case PLAB_UNKNOWN: return "Unknown";
  }
  return "Unknown";
}

const char* plab_last_error(void) { return t_last_error.c_str(); }

/* ------------------------------------------------------------------ graph */

plab_status plab_graph_parse(const char* text, plab_graph** out) {
  return guarded([&] {
    require(text && out, "null argument");
    make_graph(out, plab::parse_edge_list(text));
  });
}

plab_status plab_graph_load(const char* path, plab_graph** out) {
  return guarded([&] {
    require(path && out, "null argument");
    make_graph(out, plab::load_edge_list(path));
  });
}

plab_status plab_graph_path(size_t vertices, plab_graph** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    make_graph(out, plab::generate_path(vertices));
  });
}

plab_status plab_graph_star(size_t leaves, plab_graph** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    make_graph(out, plab::generate_star(leaves));
  });
}

plab_status plab_graph_grid(size_t rows, size_t cols, plab_graph** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    make_graph(out, plab::generate_grid(rows, cols));
  });
}

plab_status plab_graph_random(size_t vertices, double edge_prob, uint64_t seed,
                              plab_graph** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    make_graph(out, plab::generate_random(vertices, edge_prob, seed));
  });
}

void plab_graph_free(plab_graph* g) { delete g; }

size_t plab_graph_vertex_count(const plab_graph* g) {
  return g->g->vertex_count();
}

size_t plab_graph_edge_count(const plab_graph* g) { return g->g->edge_count(); }

const char* plab_graph_vertex_id(const plab_graph* g, size_t vertex) {
  if (vertex >= g->g->vertex_count()) return nullptr;
  return g->g->vertex_id(vertex).c_str();
}

plab_status plab_graph_vertex_index(const plab_graph* g, const char* id,
                                    size_t* out) {
  return guarded([&] {
    require(g && id && out, "null argument");
    *out = g->g->index_of(id);
  });
}

double plab_graph_measure(const plab_graph* g, size_t vertex) {
  return g->g->measure(vertex);
}

size_t plab_graph_degree(const plab_graph* g, size_t vertex) {
  return g->g->degree(vertex);
}

/* ----------------------------------------------------------------- domain */

plab_status plab_domain_create(const plab_graph* g, const size_t* interior,
                               size_t interior_len, plab_domain** out) {
  return guarded([&] {
    require(g && out, "null argument");
    require(interior != nullptr || interior_len == 0, "null interior array");
    for (size_t i = 0; i < interior_len; ++i)
      require(interior[i] < g->g->vertex_count(),
              "interior index out of range");
    *out = new plab_domain{plab::DirichletDomain(
        g->g, std::vector<std::size_t>(interior, interior + interior_len))};
  });
}

plab_status plab_domain_max_degree(const plab_graph* g, plab_domain** out) {
  return guarded([&] {
    require(g && out, "null argument");
    std::size_t max_deg = 0;
    for (std::size_t v = 0; v < g->g->vertex_count(); ++v)
      max_deg = std::max(max_deg, g->g->degree(v));
    std::vector<std::size_t> interior;
    for (std::size_t v = 0; v < g->g->vertex_count(); ++v)
      if (g->g->degree(v) == max_deg) interior.push_back(v);
    *out = new plab_domain{plab::DirichletDomain(g->g, std::move(interior))};
  });
}

plab_status plab_domain_whole(const plab_graph* g, plab_domain** out) {
  return guarded([&] {
    require(g && out, "null argument");
    std::vector<std::size_t> all(g->g->vertex_count());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
    *out = new plab_domain{plab::DirichletDomain(g->g, std::move(all))};
  });
}

void plab_domain_free(plab_domain* d) { delete d; }

size_t plab_domain_interior_count(const plab_domain* d) {
  return d->d.interior_count();
}

size_t plab_domain_boundary_count(const plab_domain* d) {
  return d->d.boundary_count();
}

size_t plab_domain_interior_vertex(const plab_domain* d, size_t slot) {
  if (slot >= d->d.interior_count()) return (size_t)-1;
  return d->d.interior()[slot];
}

const char* plab_domain_interior_id(const plab_domain* d, size_t slot) {
  if (slot >= d->d.interior_count()) return nullptr;
  return d->d.interior_ids()[slot].c_str();
}

/* --------------------------------------------------------------- operator */

plab_status plab_p_laplacian(const plab_domain* d, double p,
                             const double* values, double* out, size_t len) {
  return guarded([&] {
    require(d && values && out, "null argument");
    require(len == d->d.interior_count(),
            "arrays must have one entry per interior slot");
    plab::p_laplacian_dirichlet(d->d, plab::Exponent(p), {values, len},
                                {out, len});
  });
}

plab_status plab_rayleigh(const plab_domain* d, double p, const double* values,
                          size_t len, double* out) {
  return guarded([&] {
    require(d && values && out, "null argument");
    require(len == d->d.interior_count(),
            "array must have one entry per interior slot");
    *out = plab::rayleigh_quotient(d->d, plab::Exponent(p), {values, len});
  });
}

/* ------------------------------------------------------------------ eigen */

void plab_eigen_options_default(plab_eigen_options* opts) {
  if (!opts) return;
  plab::EigenOptions d;
  opts->max_iterations = d.max_iterations;
  opts->residual_tolerance = d.residual_tolerance;
  opts->lambda_rel_change = d.lambda_rel_change;
  opts->seed = d.seed;
}

plab_status plab_first_eigenpair(const plab_domain* d, double p,
                                 const plab_eigen_options* opts,
                                 plab_eigenpair** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new plab_eigenpair{
        plab::first_eigenpair(d->d, plab::Exponent(p), convert(opts))};
  });
}

void plab_eigenpair_free(plab_eigenpair* e) { delete e; }

double plab_eigenpair_lambda(const plab_eigenpair* e) { return e->e.lambda; }

double plab_eigenpair_residual(const plab_eigenpair* e) {
  return e->e.residual;
}

double plab_eigenpair_phi_min(const plab_eigenpair* e) { return e->e.phi_min; }

double plab_eigenpair_phi_sup(const plab_eigenpair* e) { return e->e.phi_sup; }

plab_status plab_eigenpair_phi(const plab_eigenpair* e, double* out,
                               size_t len) {
  return guarded([&] {
    require(e && out, "null argument");
    require(len == e->e.phi.size(),
            "array must have one entry per interior slot");
    const auto& v = e->e.phi.values();
    std::memcpy(out, v.data(), len * sizeof(double));
  });
}

/* -------------------------------------------------------------- scenarios */

void plab_integrate_options_default(plab_integrate_options* opts) {
  if (!opts) return;
  plab::IntegrateOptions d;
  opts->horizon = d.horizon;
  opts->initial_step = d.initial_step;
  opts->min_step = d.min_step;
  opts->max_step = d.max_step;
  opts->blowup_threshold = d.blowup_threshold;
  opts->rel_tol = d.rel_tol;
  opts->abs_tol = d.abs_tol;
}

void plab_scenario_options_default(plab_scenario_options* opts) {
  if (!opts) return;
  plab_integrate_options_default(&opts->integrator);
  opts->integrator.horizon = 0.0;
  plab_eigen_options_default(&opts->eigen);
  opts->run_full_graph = 1;
  opts->equality_remark = 0;
}

plab_status plab_scenario_strong_reaction(const plab_domain* d, double p,
                                          double eps, double delta,
                                          plab_sigma_fn sigma, void* sigma_ctx,
                                          const double* u0, size_t u0_len,
                                          const plab_scenario_options* opts,
                                          plab_scenario** out) {
  return guarded([&] {
    require(d && out, "null argument");
    plab_graph view{d->d.graph_ptr()};
    plab::VertexField field = field_on_graph(&view, u0, u0_len);
    *out = new plab_scenario{plab::scenario_theorem_1(
        d->d, plab::Exponent(p), eps, delta, wrap_sigma(sigma, sigma_ctx),
        field, convert(opts))};
  });
}

plab_status plab_scenario_power_reaction(const plab_domain* d, double p,
                                         double q, double C, double delta,
                                         plab_sigma_fn sigma, void* sigma_ctx,
                                         const double* u0, size_t u0_len,
                                         const plab_scenario_options* opts,
                                         plab_scenario** out) {
  return guarded([&] {
    require(d && out, "null argument");
    plab_graph view{d->d.graph_ptr()};
    plab::VertexField field = field_on_graph(&view, u0, u0_len);
    *out = new plab_scenario{plab::scenario_theorem_2(
        d->d, plab::Exponent(p), q, C, delta, wrap_sigma(sigma, sigma_ctx),
        field, convert(opts))};
  });
}

plab_status plab_integrate(const plab_domain* d, double p, plab_sigma_fn sigma,
                           void* sigma_ctx, double delta, plab_reaction_fn f,
                           void* f_ctx, const double* u0, size_t u0_len,
                           int has_power_hint, double q_hint, double C_hint,
                           const plab_integrate_options* opts,
                           plab_scenario** out) {
  return guarded([&] {
    require(d && u0 && out, "null argument");
    require(u0_len == d->d.interior_count(),
            "u0 must have one entry per interior slot");
    plab::IntegrateOptions io = convert(opts);
    std::optional<plab::PowerHint> hint;
    if (has_power_hint) hint = plab::PowerHint{q_hint, C_hint};
    plab::ProblemSpec spec(d->d, plab::Exponent(p),
                           wrap_sigma(sigma, sigma_ctx), delta, 0.0,
                           wrap_reaction(f, f_ctx),
                           std::vector<double>(u0, u0 + u0_len), hint,
                           io.horizon);
    auto [traj, report] = plab::integrate(spec, io);
    plab::ScenarioResult res;
    res.theorem_tag = "raw-integrate";
    res.as_predicted = true;
    res.trajectory = std::move(traj);
    res.report = std::move(report);
    res.lambda1 = std::numeric_limits<double>::quiet_NaN();
    *out = new plab_scenario{std::move(res)};
  });
}

void plab_scenario_free(plab_scenario* s) { delete s; }

const char* plab_scenario_tag(const plab_scenario* s) {
  return s->r.theorem_tag.c_str();
}

int plab_scenario_as_predicted(const plab_scenario* s) {
  return s->r.as_predicted ? 1 : 0;
}

size_t plab_scenario_failure_count(const plab_scenario* s) {
  return s->r.failures.size();
}

const char* plab_scenario_failure(const plab_scenario* s, size_t i) {
  if (i >= s->r.failures.size()) return nullptr;
  return s->r.failures[i].c_str();
}

double plab_scenario_lambda1(const plab_scenario* s) { return s->r.lambda1; }

int plab_scenario_detected(const plab_scenario* s) {
  return s->r.report.detected ? 1 : 0;
}

const char* plab_scenario_blowup_vertex(const plab_scenario* s) {
  if (!s->r.report.blowup_vertex) return nullptr;
  return s->r.report.blowup_vertex->c_str();
}

double plab_scenario_threshold_time(const plab_scenario* s) {
  return s->r.report.threshold_time;
}

double plab_scenario_extrapolated_time(const plab_scenario* s) {
  return s->r.report.extrapolated_time;
}

double plab_scenario_fit_residual(const plab_scenario* s) {
  return s->r.report.fit_residual;
}

double plab_scenario_time_uncertainty(const plab_scenario* s) {
  return s->r.report.time_uncertainty;
}

int plab_scenario_has_bound(const plab_scenario* s) {
  return s->r.report.theoretical_bound ? 1 : 0;
}

double plab_scenario_bound(const plab_scenario* s) {
  if (!s->r.report.theoretical_bound)
    return std::numeric_limits<double>::quiet_NaN();
  return *s->r.report.theoretical_bound;
}

size_t plab_scenario_rows(const plab_scenario* s) {
  return s->r.trajectory.times.size();
}

size_t plab_scenario_columns(const plab_scenario* s) {
  return s->r.trajectory.vertex_ids.size();
}

const char* plab_scenario_column_id(const plab_scenario* s, size_t col) {
  if (col >= s->r.trajectory.vertex_ids.size()) return nullptr;
  return s->r.trajectory.vertex_ids[col].c_str();
}

double plab_scenario_time(const plab_scenario* s, size_t row) {
  if (row >= s->r.trajectory.times.size())
    return std::numeric_limits<double>::quiet_NaN();
  return s->r.trajectory.times[row];
}

plab_status plab_scenario_state(const plab_scenario* s, size_t row, double* out,
                                size_t len) {
  return guarded([&] {
    require(s && out, "null argument");
    require(row < s->r.trajectory.states.size(), "row out of range");
    const auto& st = s->r.trajectory.states[row];
    require(len == st.size(), "array must have one entry per interior slot");
    std::memcpy(out, st.data(), len * sizeof(double));
  });
}

size_t plab_scenario_steps_accepted(const plab_scenario* s) {
  return s->r.trajectory.stats.accepted;
}

size_t plab_scenario_steps_rejected(const plab_scenario* s) {
  return s->r.trajectory.stats.rejected;
}

int plab_scenario_has_certificate(const plab_scenario* s) {
  return s->r.certificate ? 1 : 0;
}

const char* plab_scenario_certificate_error(const plab_scenario* s) {
  return s->r.certificate_error.c_str();
}

double plab_scenario_cert_a(const plab_scenario* s) {
  return cert_field(s, &plab::SubsolutionCertificate::a);
}

double plab_scenario_cert_b(const plab_scenario* s) {
  return cert_field(s, &plab::SubsolutionCertificate::b);
}

double plab_scenario_cert_eps(const plab_scenario* s) {
  return cert_field(s, &plab::SubsolutionCertificate::eps);
}

double plab_scenario_cert_h0(const plab_scenario* s) {
  return cert_field(s, &plab::SubsolutionCertificate::h0);
}

double plab_scenario_cert_equilibrium(const plab_scenario* s) {
  return cert_field(s, &plab::SubsolutionCertificate::equilibrium);
}

double plab_scenario_cert_threshold(const plab_scenario* s) {
  return cert_field(s, &plab::SubsolutionCertificate::activation_threshold);
}

double plab_scenario_cert_blowup_time(const plab_scenario* s) {
  return cert_field(s, &plab::SubsolutionCertificate::h_blowup_time);
}

double plab_scenario_cert_residual_max(const plab_scenario* s) {
  return cert_field(s, &plab::SubsolutionCertificate::residual_max);
}

double plab_scenario_cert_residual_scale(const plab_scenario* s) {
  return cert_field(s, &plab::SubsolutionCertificate::residual_scale);
}

int plab_scenario_has_comparison(const plab_scenario* s) {
  return s->r.comparison ? 1 : 0;
}

int plab_scenario_comparison_holds(const plab_scenario* s) {
  return s->r.comparison && s->r.comparison->holds ? 1 : 0;
}

double plab_scenario_comparison_min_gap(const plab_scenario* s) {
  if (!s->r.comparison) return std::numeric_limits<double>::quiet_NaN();
  return s->r.comparison->min_gap;
}

/* ------------------------------------------------------------------ bound */

plab_status plab_blowup_bound_strong(double p, double eps, double delta,
                                     double x_lower, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    require(eps > 0.0, "eps must be positive");
    require(delta > 0.0, "delta must be positive");
    plab::Exponent pe(p);
    const double coeff = 1.0 / delta + eps;
    plab::ReactionFn f = [coeff, p](double s) {
      return coeff * plab::z_power(s, p);
    };
    *out = plab::blowup_bound_F(f, delta, pe, x_lower);
  });
}

}  // extern "C"
