#include "plab/operators.hpp"

#include <algorithm>
#include <cmath>

namespace plab {

Exponent::Exponent(double p) : Exponent(p, false) {}

Exponent::Exponent(double p, bool allow_p2) : p_(p), p2_allowed_(allow_p2) {
  if (!std::isfinite(p))
    throw Error(ErrorCode::invalid_argument, "exponent p must be finite");
  if (allow_p2 ? !(p >= 2.0) : !(p > 2.0))
    throw Error(ErrorCode::invalid_argument,
                allow_p2 ? "cross-check exponent requires p >= 2"
                         : "exponent requires p > 2 (p = 2 only via the "
                           "cross-check constructor)");
}

Exponent Exponent::with_p2_crosscheck(double p) { return Exponent(p, true); }

double z_power(double s, double p) {
  if (s == 0.0) return 0.0;
  return std::pow(std::abs(s), p - 2.0) * s;
}

VertexField p_laplacian(const WeightedGraph& g, const Exponent& p,
                        const VertexField& f) {
  const double pe = p.p();
  std::vector<std::size_t> gidx(f.size());
  std::vector<double> by_vertex(g.vertex_count(), 0.0);
  std::vector<char> known(g.vertex_count(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    gidx[i] = g.index_of(f.ids()[i]);
    by_vertex[gidx[i]] = f[i];
    known[gidx[i]] = 1;
  }
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t v = gidx[i];
    double acc = 0.0;
    for (const auto& nb : g.neighbors(v)) {
      if (!known[nb.vertex])
        throw Error(ErrorCode::missing_neighbor_value,
                    "no value for neighbor '" + g.vertex_id(nb.vertex) +
                        "' of '" + g.vertex_id(v) + "'");
      acc += nb.weight * z_power(by_vertex[nb.vertex] - f[i], pe);
    }
    out[i] = acc / g.measure(v);
  }
  return VertexField(f.ids(), std::move(out));
}

void p_laplacian_dirichlet(const DirichletDomain& dom, const Exponent& p,
                           std::span<const double> interior_values,
                           std::span<double> out) {
  const double pe = p.p();
  const std::size_t m = dom.interior_count();
  if (interior_values.size() != m || out.size() != m)
    throw Error(ErrorCode::support_mismatch,
                "expected " + std::to_string(m) + " interior values");
  for (std::size_t s = 0; s < m; ++s) {
    const double fx = interior_values[s];
    double acc = 0.0;
    for (const auto& ln : dom.interior_links(s))
      acc += ln.weight * z_power(interior_values[ln.slot] - fx, pe);
    for (const auto& ln : dom.boundary_links(s))
      acc += ln.weight * z_power(ln.value - fx, pe);
    out[s] = acc * dom.inv_measure(s);
  }
}

VertexField p_laplacian_dirichlet(const DirichletDomain& dom, const Exponent& p,
                                  const VertexField& f) {
  if (f.ids() != dom.interior_ids())
    throw Error(ErrorCode::support_mismatch,
                "field support must equal the interior vertex set");
  std::vector<double> out(f.size());
  p_laplacian_dirichlet(dom, p, f.span(), out);
  return VertexField(f.ids(), std::move(out));
}

}  // namespace plab
