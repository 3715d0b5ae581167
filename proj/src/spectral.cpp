#include "plab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plab/rng.hpp"

namespace plab {

namespace {

/// Dirichlet operator with the boundary forced to zero, which is the only
/// boundary condition the eigenproblem is posed for.
void apply_zero_boundary(const DirichletDomain& dom, double pe,
                         std::span<const double> f, std::span<double> out) {
  const std::size_t m = dom.interior_count();
  for (std::size_t s = 0; s < m; ++s) {
    double acc = 0.0;
    for (const auto& ln : dom.interior_links(s))
      acc += ln.weight * z_power(f[ln.slot] - f[s], pe);
    for (const auto& ln : dom.boundary_links(s))
      acc += ln.weight * z_power(-f[s], pe);
    out[s] = acc * dom.inv_measure(s);
  }
}

double lp_norm_denominator(const DirichletDomain& dom, double pe,
                           std::span<const double> f) {
  double den = 0.0;
  for (std::size_t s = 0; s < dom.interior_count(); ++s)
    den += std::pow(std::abs(f[s]), pe) / dom.inv_measure(s);
  return den;
}

}  // namespace

double rayleigh_quotient(const DirichletDomain& dom, const Exponent& p,
                         std::span<const double> f) {
  const double pe = p.p();
  const std::size_t m = dom.interior_count();
  if (f.size() != m)
    throw Error(ErrorCode::support_mismatch,
                "expected " + std::to_string(m) + " interior values");
  double num = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    for (const auto& ln : dom.interior_links(s))
      if (ln.slot > s) num += ln.weight * std::pow(std::abs(f[ln.slot] - f[s]), pe);
    for (const auto& ln : dom.boundary_links(s))
      num += ln.weight * std::pow(std::abs(f[s]), pe);
  }
  const double den = lp_norm_denominator(dom, pe, f);
  if (den == 0.0)
    throw Error(ErrorCode::zero_denominator,
                "Rayleigh quotient of the zero field");
  return num / den;
}

double eigen_residual(const DirichletDomain& dom, const Exponent& p,
                      double lambda, std::span<const double> phi) {
  const std::size_t m = dom.interior_count();
  if (phi.size() != m)
    throw Error(ErrorCode::support_mismatch,
                "expected " + std::to_string(m) + " interior values");
  std::vector<double> lap(m);
  apply_zero_boundary(dom, p.p(), phi, lap);
  double r = 0.0;
  for (std::size_t s = 0; s < m; ++s)
    r = std::max(r, std::abs(-lap[s] - lambda * z_power(phi[s], p.p())));
  return r;
}

namespace {

EigenPair descend(const DirichletDomain& dom, const Exponent& p,
                  std::vector<double> f, const EigenOptions& opts) {
  const double pe = p.p();
  const std::size_t m = dom.interior_count();

  auto normalize = [&](std::vector<double>& v) {
    double den = lp_norm_denominator(dom, pe, v);
    if (den == 0.0)
      throw Error(ErrorCode::zero_denominator,
                  "iterate collapsed to the zero field");
    const double scale = std::pow(den, 1.0 / pe);
    for (double& x : v) x = std::abs(x) / scale;
  };
  normalize(f);

  std::vector<double> lap(m), grad(m), prev_f(m), prev_grad(m), trial(m);
  double lambda = 0.0;
  double prev_lambda = std::numeric_limits<double>::quiet_NaN();
  double residual_sup = std::numeric_limits<double>::infinity();
  double step = 0.1;
  bool have_prev = false;

  auto quotient_at = [&](const std::vector<double>& v) {
    return rayleigh_quotient(dom, p, v);
  };

  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    apply_zero_boundary(dom, pe, f, lap);
    double den = lp_norm_denominator(dom, pe, f);
    double num = 0.0;
    for (std::size_t s = 0; s < m; ++s)
      num += f[s] * (-lap[s]) / dom.inv_measure(s);
    lambda = num / den;

    double sup = 0.0;
    double res = 0.0;
    double gnorm2 = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      const double defect = -lap[s] - lambda * z_power(f[s], pe);
      grad[s] = pe * defect / (dom.inv_measure(s) * den);
      res = std::max(res, std::abs(defect));
      sup = std::max(sup, std::abs(f[s]));
      gnorm2 += grad[s] * grad[s];
    }
    residual_sup = res / std::pow(sup, pe - 1.0);

    const bool lambda_settled =
        std::isnan(prev_lambda) ||
        std::abs(lambda - prev_lambda) <=
            opts.lambda_rel_change * std::max(std::abs(lambda), 1e-300);
    if (residual_sup <= opts.residual_tolerance && lambda_settled) break;
    prev_lambda = lambda;

    if (gnorm2 == 0.0) break;

    // Barzilai-Borwein trial step, then backtrack until the quotient drops.
    if (have_prev) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t s = 0; s < m; ++s) {
        const double df = f[s] - prev_f[s];
        ss += df * df;
        sy += df * (grad[s] - prev_grad[s]);
      }
      if (sy > 0.0 && ss > 0.0) step = ss / sy;
    }
    step = std::clamp(step, 1e-16, 1e8);
    prev_f = f;
    prev_grad = grad;
    have_prev = true;

    bool moved = false;
    double trial_step = step;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t s = 0; s < m; ++s) trial[s] = f[s] - trial_step * grad[s];
      normalize(trial);
      const double q = quotient_at(trial);
      if (q <= lambda - 1e-4 * trial_step * gnorm2 ||
          (bt == 59 && q <= lambda)) {
        f = trial;
        step = trial_step;
        moved = true;
        break;
      }
      trial_step *= 0.5;
    }
    if (!moved) break;  // line search stagnated; convergence check decides
  }

  double sup = *std::max_element(f.begin(), f.end());
  std::vector<double> phi(m);
  for (std::size_t s = 0; s < m; ++s) phi[s] = f[s] / sup;
  const double residual = eigen_residual(dom, p, lambda, phi);

  if (!(residual <= opts.residual_tolerance))
    throw Error(ErrorCode::no_convergence,
                "eigen solver stalled with residual " + std::to_string(residual));
  for (std::size_t s = 0; s < m; ++s)
    if (!(phi[s] > 1e-12))
      throw Error(ErrorCode::no_convergence,
                  "eigenfunction not strictly positive at '" +
                      dom.interior_ids()[s] + "'");

  EigenPair pair;
  pair.lambda = lambda;
  pair.phi = VertexField(dom.interior_ids(), std::move(phi));
  pair.p = pe;
  pair.residual = residual;
  pair.phi_min = pair.phi.min();
  pair.phi_sup = 1.0;
  return pair;
}

void require_eigen_domain(const DirichletDomain& dom) {
  if (dom.boundary_count() == 0)
    throw Error(ErrorCode::empty_boundary,
                "eigenproblem needs a nonempty exterior boundary");
  if (!dom.zero_boundary())
    throw Error(ErrorCode::nonzero_boundary_data,
                "eigenproblem needs zero boundary data");
  // Interior connectivity is a domain invariant, checked at construction.
}

}  // namespace

EigenPair first_eigenpair(const DirichletDomain& dom, const Exponent& p,
                          const EigenOptions& opts) {
  require_eigen_domain(dom);
  Rng rng(opts.seed);
  std::vector<double> f(dom.interior_count());
  for (double& x : f) x = rng.uniform(0.5, 1.5);
  return descend(dom, p, std::move(f), opts);
}

EigenPair first_eigenpair_from(const DirichletDomain& dom, const Exponent& p,
                               std::span<const double> initial,
                               const EigenOptions& opts) {
  require_eigen_domain(dom);
  if (initial.size() != dom.interior_count())
    throw Error(ErrorCode::support_mismatch,
                "initial guess must have one value per interior vertex");
  return descend(dom, p, std::vector<double>(initial.begin(), initial.end()),
                 opts);
}

NodalDecomposition strong_nodal_domains(const DirichletDomain& dom,
                                        std::span<const double> f) {
  const std::size_t m = dom.interior_count();
  if (f.size() != m)
    throw Error(ErrorCode::support_mismatch,
                "expected " + std::to_string(m) + " interior values");
  NodalDecomposition out;
  std::vector<char> visited(m, 0);
  for (std::size_t s = 0; s < m; ++s) {
    if (f[s] == 0.0) {
      out.zero_set.push_back(s);
      continue;
    }
    if (visited[s]) continue;
    const bool positive = f[s] > 0.0;
    std::vector<std::size_t> comp, stack = {s};
    visited[s] = 1;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (const auto& ln : dom.interior_links(v)) {
        const bool same_sign = positive ? f[ln.slot] > 0.0 : f[ln.slot] < 0.0;
        if (same_sign && !visited[ln.slot]) {
          visited[ln.slot] = 1;
          stack.push_back(ln.slot);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    (positive ? out.positive : out.negative).push_back(std::move(comp));
  }
  return out;
}

}  // namespace plab
