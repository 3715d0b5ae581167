#ifndef PLAB_GRAPH_HPP
#define PLAB_GRAPH_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "plab/errors.hpp"

namespace plab {

using VertexId = std::string;

struct Edge {
  VertexId a;
  VertexId b;
  double weight = 1.0;
};

/// Finite weighted undirected graph. Vertices are opaque string ids kept in
/// lexicographic order; every index-based accessor refers to that order.
/// Instances are immutable after construction.
///
/// The vertex measure is mu(x) = sum of incident edge weights, so the graph
/// carries its own normalization for the p-Laplacian.
class WeightedGraph {
 public:
  struct Neighbor {
    std::size_t vertex;
    double weight;
  };

  /// Validates: positive weights, no self loops, no duplicate unordered pair
  /// with conflicting weights (duplicates with equal weight collapse), no
  /// isolated vertices among `extra_vertices`.
  static WeightedGraph build(std::span<const Edge> edges,
                             std::span<const VertexId> extra_vertices = {});

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<VertexId>& vertex_ids() const { return ids_; }
  const VertexId& vertex_id(std::size_t v) const { return ids_[v]; }

  /// Index of `id` in lexicographic order; throws unknown_vertex otherwise.
  std::size_t index_of(const VertexId& id) const;
  bool contains(const VertexId& id) const;

  double measure(std::size_t v) const { return measure_[v]; }
  std::span<const Neighbor> neighbors(std::size_t v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
  /// Weight of edge {a, b}, or 0 when not adjacent.
  double weight(std::size_t a, std::size_t b) const;

  bool connected() const;

 private:
  WeightedGraph() = default;

  std::vector<VertexId> ids_;
  std::vector<double> measure_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Exterior boundary of U: vertices outside U with a neighbor in U.
/// Returns sorted graph indices. Throws empty_interior / unknown_vertex.
std::vector<std::size_t> boundary_of(const WeightedGraph& g,
                                     std::span<const std::size_t> interior);

/// True when the subgraph induced by `vertices` is connected
/// (vacuously true for the empty set).
bool induced_connected(const WeightedGraph& g,
                       std::span<const std::size_t> vertices);

/// Generators used by tests and the CLI. Unit weights, ids zero-padded so the
/// lexicographic order matches construction order. `generate_random` draws an
/// Erdos-Renyi graph and retries (seed+1, ...) until connected; throws
/// disconnected_after_retries after 64 attempts.
WeightedGraph generate_path(std::size_t n);
WeightedGraph generate_star(std::size_t leaves);
WeightedGraph generate_grid(std::size_t rows, std::size_t cols);
WeightedGraph generate_random(std::size_t n, double edge_prob, std::uint64_t seed);

/// Parses the edge-list text format: one `<id> <id> <weight>` per line,
/// whitespace separated, `#` starts a comment. Violations are reported with
/// their 1-based line number.
WeightedGraph parse_edge_list(const std::string& text);
WeightedGraph load_edge_list(const std::string& path);

/// Interior set U together with its exterior boundary and Dirichlet data.
/// Construction computes the boundary, checks the induced interior is
/// connected, and freezes boundary values (default 0 on every boundary
/// vertex). Adjacency is pre-split per interior vertex so operator
/// evaluation is allocation free.
class DirichletDomain {
 public:
  struct InteriorLink {
    std::size_t slot;  // index into interior()
    double weight;
  };
  struct BoundaryLink {
    double value;
    double weight;
  };

  DirichletDomain(std::shared_ptr<const WeightedGraph> graph,
                  std::vector<std::size_t> interior,
                  const std::map<std::size_t, double>& boundary_data = {});

  const WeightedGraph& graph() const { return *graph_; }
  const std::shared_ptr<const WeightedGraph>& graph_ptr() const { return graph_; }

  std::span<const std::size_t> interior() const { return interior_; }
  std::span<const std::size_t> boundary() const { return boundary_; }
  std::size_t interior_count() const { return interior_.size(); }
  std::size_t boundary_count() const { return boundary_.size(); }

  /// Sorted ids of the interior vertices (column order of trajectories).
  const std::vector<VertexId>& interior_ids() const { return interior_ids_; }
  /// Slot of a graph vertex within interior(), or npos.
  std::size_t interior_slot(std::size_t graph_vertex) const;

  double boundary_value(std::size_t boundary_slot) const { return boundary_values_[boundary_slot]; }
  bool zero_boundary() const { return zero_boundary_; }

  std::span<const InteriorLink> interior_links(std::size_t slot) const {
    return {ilinks_.data() + ioffsets_[slot], ioffsets_[slot + 1] - ioffsets_[slot]};
  }
  std::span<const BoundaryLink> boundary_links(std::size_t slot) const {
    return {blinks_.data() + boffsets_[slot], boffsets_[slot + 1] - boffsets_[slot]};
  }
  double inv_measure(std::size_t slot) const { return inv_measure_[slot]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::shared_ptr<const WeightedGraph> graph_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
  std::vector<double> boundary_values_;
  std::vector<VertexId> interior_ids_;
  std::vector<std::size_t> slot_of_;  // graph vertex -> interior slot or npos
  bool zero_boundary_ = true;

  std::vector<std::size_t> ioffsets_, boffsets_;
  std::vector<InteriorLink> ilinks_;
  std::vector<BoundaryLink> blinks_;
  std::vector<double> inv_measure_;
};

}  // namespace plab

#endif
