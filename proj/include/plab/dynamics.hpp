#ifndef PLAB_DYNAMICS_HPP
#define PLAB_DYNAMICS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plab/field.hpp"
#include "plab/graph.hpp"
#include "plab/operators.hpp"

namespace plab {

/// Source coefficient sigma(x, t); x is a graph vertex index.
using SigmaFn = std::function<double(std::size_t, double)>;
/// Nonlinearity f(s), locally Lipschitz with f(0) = 0.
using ReactionFn = std::function<double(double)>;

struct PowerHint {
  double q;
  double C;
};

/// The initial/boundary value problem
///   u_t = Delta_p|_U u + sigma(x,t) f(u),   u(0) = u0 >= 0,
/// with zero Dirichlet data on the exterior boundary. Construction validates
/// u0 >= 0, f(0) = 0, and sigma within its declared bounds on a sampled
/// (vertex x time) grid.
class ProblemSpec {
 public:
  /// sigma_upper <= 0 means "derive from samples". `sigma_samples` controls
  /// the validation grid density in time.
  ProblemSpec(DirichletDomain domain, Exponent p, SigmaFn sigma,
              double sigma_lower, double sigma_upper, ReactionFn reaction,
              std::vector<double> initial,
              std::optional<PowerHint> exponents = std::nullopt,
              double sigma_check_horizon = 1.0, std::size_t sigma_samples = 64);

  const DirichletDomain& domain() const { return domain_; }
  const Exponent& p() const { return p_; }
  const SigmaFn& sigma() const { return sigma_; }
  double sigma_lower() const { return sigma_lower_; }
  double sigma_upper() const { return sigma_upper_; }
  const ReactionFn& reaction() const { return reaction_; }
  const std::vector<double>& initial() const { return initial_; }
  const std::optional<PowerHint>& exponents() const { return exponents_; }

  /// Re-check the sigma bounds over [0, horizon]; throws hypothesis_violated.
  void check_sigma(double horizon, std::size_t samples = 64) const;

 private:
  DirichletDomain domain_;
  Exponent p_;
  SigmaFn sigma_;
  double sigma_lower_;
  // Derived lazily from samples when constructed with a nonpositive bound.
  mutable double sigma_upper_;
  ReactionFn reaction_;
  std::vector<double> initial_;
  std::optional<PowerHint> exponents_;
};

/// Right-hand side Delta_p|_U v + sigma(.,t) f(v) on the interior.
std::vector<double> rhs(const ProblemSpec& spec, double t,
                        std::span<const double> v);

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double min_step = 0.0;
  double max_step = 0.0;
};

/// Time grid plus one interior state per grid point. `vertex_ids` fixes the
/// column order (sorted interior ids).
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<VertexId> vertex_ids;
  StepStats stats;

  VertexField field(std::size_t i) const {
    return VertexField(vertex_ids, states[i]);
  }
};

struct IntegrateOptions {
  double horizon = 1.0;
  double initial_step = 0.0;       // 0: horizon / 1024
  double min_step = 0.0;           // 0: 1e-12 * horizon
  double max_step = 0.0;           // 0: no cap beyond horizon
  double blowup_threshold = 1e8;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// When nonempty, steps land exactly on these times (dense comparisons).
  std::vector<double> sample_times;
};

struct BlowupReport {
  bool detected = false;
  std::optional<VertexId> blowup_vertex;
  double threshold_time = 0.0;
  double extrapolated_time = 0.0;
  double fit_residual = 0.0;
  double time_uncertainty = 0.0;
  std::optional<double> theoretical_bound;
};

/// Adaptive explicit integrator: two fourth-order estimates per step (full
/// step vs two halves), componentwise acceptance
///   |err| <= abs_tol + rel_tol |state|,
/// fifth-order update by extrapolation. Stops at the horizon, when sup|u|
/// crosses blowup_threshold (detected), or when the step underflows: near a
/// singularity that also counts as detected, otherwise
/// step_underflow_without_growth is thrown.
///
/// On detection the blow-up time is extrapolated by least squares of
/// log sup(t) against log(T - t) over the last accepted steps, with the
/// growth exponent taken from spec.exponents() when present.
std::pair<Trajectory, BlowupReport> integrate(const ProblemSpec& spec,
                                              const IntegrateOptions& opts);

/// Picard iteration for the integral form of the same problem on a uniform
/// grid (grid_per_unit points per unit time, composite trapezoid). Converged
/// when the sweep-to-sweep sup distance is <= tol; no_contraction after three
/// consecutive non-decreasing distances, max_sweeps_exceeded otherwise.
Trajectory picard_solve(const ProblemSpec& spec, double horizon, double tol,
                        std::size_t max_sweeps = 200,
                        std::size_t grid_per_unit = 1024);

struct SupSample {
  double time;
  double value;
  VertexId vertex;  // argmax, lexicographic tie-break
};

std::vector<SupSample> sup_trajectory(const Trajectory& traj);

/// F(x) = integral from x to infinity of ds / (delta f(s) - s^{p-1}),
/// computed after the tail substitution s = x / (1 - tau) by tanh-sinh level
/// refinement to absolute error quad_tol. The denominator must be positive
/// for s >= x (validated by sampling; nonpositive_denominator otherwise).
double blowup_bound_F(const ReactionFn& f, double delta, const Exponent& p,
                      double x_lower, double quad_tol = 1e-9);

/// Least-squares blow-up time fit shared by integrate and the scalar ODE
/// solver; exposed for direct testing.
struct BlowupFit {
  double t_star = 0.0;
  double fit_residual = 0.0;   // RMS of the fit, mapped to time units
  double uncertainty = 0.0;
};

BlowupFit fit_blowup_time(std::span<const double> times,
                          std::span<const double> sups,
                          std::optional<double> q_hint, double rel_tol,
                          double abs_tol);

}  // namespace plab

#endif
