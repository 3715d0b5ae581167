#ifndef PLAB_OPERATORS_HPP
#define PLAB_OPERATORS_HPP

#include <span>

#include "plab/field.hpp"
#include "plab/graph.hpp"

namespace plab {

/// Exponent of the p-Laplacian. The theory here needs p > 2; p = 2 is only
/// admitted through the explicit cross-check constructor so linear-case
/// comparisons stay a deliberate act.
class Exponent {
 public:
  explicit Exponent(double p);
  static Exponent with_p2_crosscheck(double p);

  double p() const { return p_; }
  bool p2_allowed() const { return p2_allowed_; }

 private:
  Exponent(double p, bool allow_p2);
  double p_;
  bool p2_allowed_;
};

/// z(s) = |s|^{p-2} s, the odd strictly increasing kernel of the operator.
double z_power(double s, double p);

/// Graph p-Laplacian at every vertex of support(f):
///   (Delta_p f)(x) = mu(x)^{-1} sum_{y ~ x} w_xy z(f(y) - f(x)).
/// The closed neighborhood of each evaluated vertex must lie in support(f);
/// otherwise missing_neighbor_value.
VertexField p_laplacian(const WeightedGraph& g, const Exponent& p,
                        const VertexField& f);

/// Dirichlet restriction: f lives exactly on the interior, neighbors outside
/// use the domain's frozen boundary data. Allocation-free core.
void p_laplacian_dirichlet(const DirichletDomain& dom, const Exponent& p,
                           std::span<const double> interior_values,
                           std::span<double> out);

/// Convenience wrapper validating support(f) == interior ids.
VertexField p_laplacian_dirichlet(const DirichletDomain& dom, const Exponent& p,
                                  const VertexField& f);

}  // namespace plab

#endif
