#ifndef PLAB_CERTIFICATES_HPP
#define PLAB_CERTIFICATES_HPP

#include <optional>
#include <string>

#include "plab/dynamics.hpp"
#include "plab/spectral.hpp"

namespace plab {

/// IntegrateOptions whose horizon is left unset (nonpositive), telling the
/// certificate and scenario builders to derive one from the theory.
inline IntegrateOptions unset_horizon() {
  IntegrateOptions opts;
  opts.horizon = 0.0;
  return opts;
}

struct ComparisonReport {
  bool holds = false;
  double min_gap = 0.0;
  double scale = 0.0;  // max magnitude seen, sets the slack 1e-9 (1 + scale)
  struct Witness {
    VertexId vertex;
    double time;
    double gap;
  };
  std::optional<Witness> violation;  // earliest in time, then by vertex id
};

/// Pointwise ordering u >= v after resampling both trajectories onto the
/// union of their time grids (linear interpolation) over the shared window.
/// Vertex columns must agree with each other and with dom's interior.
ComparisonReport check_comparison(const Trajectory& u, const Trajectory& v,
                                  const DirichletDomain& dom);

/// Scalar Cauchy problem dh/dt = -a h + b h^q, h(0) = h0, integrated with the
/// shared adaptive stepper until the blow-up threshold. h0 must exceed the
/// equilibrium (a/b)^{1/(q-1)} (below_equilibrium otherwise); a, b > 0.
struct HOdeResult {
  std::vector<double> times;
  std::vector<double> values;
  double blowup_time = 0.0;
  double fit_residual = 0.0;
  double time_uncertainty = 0.0;
};

HOdeResult h_ode_solve(double a, double b, double q, double h0,
                       const IntegrateOptions& opts = {});

/// Closed-form blow-up time of the same problem (oracle for tests):
///   T = ln( (b/a) / ((b/a) - h0^{1-q}) ) / ((q-1) a).
double h_ode_blowup_closed_form(double a, double b, double q, double h0);

/// (lambda1 ||phi||_inf^{p-2} / (C delta phi0^q))^{1/(q-1)} for a
/// sup-normalized eigenpair; initial data strictly above this activates the
/// separable subsolution.
double threshold_initial(const EigenPair& pair, double C, double delta,
                         double q);

/// Separable subsolution v(x,t) = h(t) phi(x) built from the first eigenpair
/// and the Bernoulli ODE with a = lambda1 ||phi||^{p-2}, b = C delta phi0^q,
/// h0 = equilibrium + eps. The defining inequality
///   v_t - Delta_p|_U v - sigma f(v) <= 0
/// is evaluated on the full h grid with v_t = h'(t) phi(x) analytic; if it
/// fails beyond slack 1e-9 (1 + scale) the certificate is rejected with
/// hypothesis_violated naming the first offending (vertex, time).
struct SubsolutionCertificate {
  EigenPair eigenpair;
  double q = 0.0;
  double C = 0.0;
  double delta = 0.0;
  double a = 0.0;
  double b = 0.0;
  double eps = 0.0;
  double h0 = 0.0;
  double equilibrium = 0.0;      // (a/b)^{1/(q-1)}
  double activation_threshold = 0.0;  // threshold_initial of the same pair
  HOdeResult h;
  double h_blowup_time = 0.0;
  Trajectory vbar;               // h(t_i) phi on the h grid
  double residual_max = 0.0;
  double residual_scale = 0.0;
};

struct SubsolutionOptions {
  /// eps <= 0 picks the default 0.1 * equilibrium.
  double eps = 0.0;
  /// ode.horizon <= 0 picks twice the closed-form blow-up time.
  IntegrateOptions ode = unset_horizon();
  EigenOptions eigen;
  std::size_t sigma_time_samples = 128;
  std::size_t reaction_samples = 1000;
};

SubsolutionCertificate build_subsolution(const DirichletDomain& dom,
                                         const Exponent& p, double q, double C,
                                         double delta, const SigmaFn& sigma,
                                         const ReactionFn& f,
                                         const SubsolutionOptions& opts = {});

/// Scenario outcomes bundle everything the CLI serializes. `theorem_tag` is
/// metadata only; the equality variants integrate the identical problem.
struct ScenarioResult {
  std::string theorem_tag;
  bool as_predicted = false;
  std::vector<std::string> failures;  // why as_predicted is false, if so

  Trajectory trajectory;  // Dirichlet auxiliary run
  BlowupReport report;
  double lambda1 = 0.0;  // NaN when no eigenpair was needed

  std::optional<SubsolutionCertificate> certificate;
  std::string certificate_error;  // nonempty when construction was rejected
  std::optional<ComparisonReport> comparison;
  std::optional<Trajectory> full_graph_trajectory;
};

struct ScenarioOptions {
  /// integrator.horizon <= 0 picks twice the scenario's own theoretical
  /// blow-up bound.
  IntegrateOptions integrator = unset_horizon();
  EigenOptions eigen;
  /// theorem-1 only: also run the unrestricted problem on all of V and check
  /// it dominates the Dirichlet solution on U.
  bool run_full_graph = true;
  /// Tag the result as the equality-case remark (metadata only).
  bool equality_remark = false;
};

/// Blow-up for the strong reaction f(s) = (1/delta + eps)|s|^{p-2} s:
/// integrates the auxiliary problem, computes the bound F(max u0), asserts
/// detection and extrapolated_time <= bound within 2 percent. u0 lives on all
/// of V; it must be >= 0 and not identically zero on U.
ScenarioResult scenario_theorem_1(const DirichletDomain& dom, const Exponent& p,
                                  double eps, double delta, const SigmaFn& sigma,
                                  const VertexField& u0,
                                  const ScenarioOptions& opts = {});

/// Blow-up above the eigenpair threshold for f(s) = C |s|^{q-1} s with
/// 1 < q <= p-1: requires min_U u0 > threshold_initial, builds the
/// subsolution certificate, integrates, and checks v >= h phi plus detection.
/// A certificate whose residual check fails is recorded in certificate_error
/// and the scenario continues on the measured dynamics.
ScenarioResult scenario_theorem_2(const DirichletDomain& dom, const Exponent& p,
                                  double q, double C, double delta,
                                  const SigmaFn& sigma, const VertexField& u0,
                                  const ScenarioOptions& opts = {});

}  // namespace plab

#endif
