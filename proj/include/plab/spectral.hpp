#ifndef PLAB_SPECTRAL_HPP
#define PLAB_SPECTRAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "plab/field.hpp"
#include "plab/graph.hpp"
#include "plab/operators.hpp"

namespace plab {

/// Rayleigh quotient for the Dirichlet problem, f given on the interior and
/// extended by zero outside:
///   R_p(f) = (1/2) sum_{x,y} w_xy |f(y)-f(x)|^p / sum_{x in U} mu(x)|f(x)|^p.
/// Throws zero_denominator when f vanishes identically.
double rayleigh_quotient(const DirichletDomain& dom, const Exponent& p,
                         std::span<const double> f);

struct EigenOptions {
  std::size_t max_iterations = 200000;
  double residual_tolerance = 1e-8;
  /// Relative lambda stagnation required alongside the residual test.
  double lambda_rel_change = 1e-10;
  std::uint64_t seed = 1;
};

struct EigenPair {
  double lambda = 0.0;
  VertexField phi;  // on the interior, sup-normalized to 1
  double p = 0.0;
  double residual = 0.0;
  double phi_min = 0.0;
  double phi_sup = 0.0;
};

/// First Dirichlet eigenpair of -Delta_p by projected descent on the l^p
/// sphere: subgradient step with backtracking line search, pointwise absolute
/// value, renormalize. Requires zero boundary data, nonempty boundary and a
/// connected interior. The returned phi is strictly positive on U and
/// sup-normalized to 1; lambda is its Rayleigh quotient.
EigenPair first_eigenpair(const DirichletDomain& dom, const Exponent& p,
                          const EigenOptions& opts = {});

/// Same solver started from an explicit initial field (used by scaling and
/// perturbation tests).
EigenPair first_eigenpair_from(const DirichletDomain& dom, const Exponent& p,
                               std::span<const double> initial,
                               const EigenOptions& opts = {});

/// max over U of | -Delta_p|_U phi - lambda |phi|^{p-2} phi |.
double eigen_residual(const DirichletDomain& dom, const Exponent& p,
                      double lambda, std::span<const double> phi);

/// Maximal connected components of {f > 0} and {f < 0} in the induced
/// interior subgraph. Slots refer to dom.interior().
struct NodalDecomposition {
  std::vector<std::vector<std::size_t>> positive;
  std::vector<std::vector<std::size_t>> negative;
  std::vector<std::size_t> zero_set;
};

NodalDecomposition strong_nodal_domains(const DirichletDomain& dom,
                                        std::span<const double> f);

}  // namespace plab

#endif
