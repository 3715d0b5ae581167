#include "plab/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "plab/rng.hpp"

namespace plab {

namespace {

std::string describe_edge(const Edge& e) {
  return "{" + e.a + ", " + e.b + "}";
}

}  // namespace

WeightedGraph WeightedGraph::build(std::span<const Edge> edges,
                                   std::span<const VertexId> extra_vertices) {
  // Canonical vertex order first, then a sorted unordered-pair edge map so
  // duplicates and conflicts surface deterministically.
  std::vector<VertexId> ids(extra_vertices.begin(), extra_vertices.end());
  for (const Edge& e : edges) {
    ids.push_back(e.a);
    ids.push_back(e.b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  WeightedGraph g;
  g.ids_ = std::move(ids);

  auto index = [&g](const VertexId& id) {
    return static_cast<std::size_t>(
        std::lower_bound(g.ids_.begin(), g.ids_.end(), id) - g.ids_.begin());
  };

  std::map<std::pair<std::size_t, std::size_t>, double> pair_weight;
  for (const Edge& e : edges) {
    if (e.a == e.b)
      throw Error(ErrorCode::self_loop, "self loop at vertex '" + e.a + "'");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw Error(ErrorCode::nonpositive_weight,
                  "edge " + describe_edge(e) + " has weight " +
                      std::to_string(e.weight));
    std::size_t ia = index(e.a), ib = index(e.b);
    auto key = std::minmax(ia, ib);
    auto [it, inserted] = pair_weight.emplace(key, e.weight);
    if (!inserted && it->second != e.weight)
      throw Error(ErrorCode::asymmetric_input,
                  "edge " + describe_edge(e) + " repeated with weights " +
                      std::to_string(it->second) + " and " +
                      std::to_string(e.weight));
  }

  const std::size_t n = g.ids_.size();
  std::vector<std::vector<Neighbor>> adj(n);
  for (const auto& [key, w] : pair_weight) {
    adj[key.first].push_back({key.second, w});
    adj[key.second].push_back({key.first, w});
  }

  for (const VertexId& id : extra_vertices) {
    if (adj[index(id)].empty())
      throw Error(ErrorCode::isolated_vertex,
                  "vertex '" + id + "' has no incident edge");
  }

  g.edge_count_ = pair_weight.size();
  g.offsets_.assign(n + 1, 0);
  g.measure_.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adj[v].begin(), adj[v].end(),
              [](const Neighbor& x, const Neighbor& y) { return x.vertex < y.vertex; });
    g.offsets_[v + 1] = g.offsets_[v] + adj[v].size();
    for (const Neighbor& nb : adj[v]) g.measure_[v] += nb.weight;
  }
  g.adjacency_.reserve(g.offsets_[n]);
  for (std::size_t v = 0; v < n; ++v)
    g.adjacency_.insert(g.adjacency_.end(), adj[v].begin(), adj[v].end());
  return g;
}

std::size_t WeightedGraph::index_of(const VertexId& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id)
    throw Error(ErrorCode::unknown_vertex, "unknown vertex '" + id + "'");
  return static_cast<std::size_t>(it - ids_.begin());
}

bool WeightedGraph::contains(const VertexId& id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

double WeightedGraph::weight(std::size_t a, std::size_t b) const {
  for (const Neighbor& nb : neighbors(a))
    if (nb.vertex == b) return nb.weight;
  return 0.0;
}

bool WeightedGraph::connected() const {
  if (ids_.empty()) return true;
  std::vector<char> seen(ids_.size(), 0);
  std::vector<std::size_t> stack = {0};
  seen[0] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    ++count;
    for (const Neighbor& nb : neighbors(v)) {
      if (!seen[nb.vertex]) {
        seen[nb.vertex] = 1;
        stack.push_back(nb.vertex);
      }
    }
  }
  return count == ids_.size();
}

std::vector<std::size_t> boundary_of(const WeightedGraph& g,
                                     std::span<const std::size_t> interior) {
  if (interior.empty())
    throw Error(ErrorCode::empty_interior, "interior set is empty");
  std::vector<char> in_u(g.vertex_count(), 0);
  for (std::size_t v : interior) {
    if (v >= g.vertex_count())
      throw Error(ErrorCode::unknown_vertex,
                  "interior index " + std::to_string(v) + " out of range");
    in_u[v] = 1;
  }
  std::vector<char> in_b(g.vertex_count(), 0);
  for (std::size_t v : interior)
    for (const auto& nb : g.neighbors(v))
      if (!in_u[nb.vertex]) in_b[nb.vertex] = 1;
  std::vector<std::size_t> boundary;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (in_b[v]) boundary.push_back(v);
  return boundary;
}

bool induced_connected(const WeightedGraph& g,
                       std::span<const std::size_t> vertices) {
  if (vertices.empty()) return true;
  std::vector<char> in_set(g.vertex_count(), 0);
  for (std::size_t v : vertices) {
    if (v >= g.vertex_count())
      throw Error(ErrorCode::unknown_vertex,
                  "vertex index " + std::to_string(v) + " out of range");
    in_set[v] = 1;
  }
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<std::size_t> stack = {vertices[0]};
  seen[vertices[0]] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    ++count;
    for (const auto& nb : g.neighbors(v))
      if (in_set[nb.vertex] && !seen[nb.vertex]) {
        seen[nb.vertex] = 1;
        stack.push_back(nb.vertex);
      }
  }
  return count == vertices.size();
}

namespace {

std::string padded(std::size_t i, std::size_t count) {
  std::size_t width = 1;
  for (std::size_t m = (count > 0 ? count - 1 : 0); m >= 10; m /= 10) ++width;
  std::string s = std::to_string(i);
  return std::string(width - s.size(), '0') + s;
}

}  // namespace

WeightedGraph generate_path(std::size_t n) {
  if (n < 2)
    throw Error(ErrorCode::degenerate_size,
                "path needs at least 2 vertices, got " + std::to_string(n));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({"v" + padded(i, n), "v" + padded(i + 1, n), 1.0});
  return WeightedGraph::build(edges);
}

WeightedGraph generate_star(std::size_t leaves) {
  if (leaves < 1)
    throw Error(ErrorCode::degenerate_size, "star needs at least 1 leaf");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < leaves; ++i)
    edges.push_back({"c", "v" + padded(i, leaves), 1.0});
  return WeightedGraph::build(edges);
}

WeightedGraph generate_grid(std::size_t rows, std::size_t cols) {
  if (rows * cols < 2)
    throw Error(ErrorCode::degenerate_size, "grid needs at least 2 vertices");
  auto name = [&](std::size_t r, std::size_t c) {
    return "v" + padded(r, rows) + "_" + padded(c, cols);
  };
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({name(r, c), name(r, c + 1), 1.0});
      if (r + 1 < rows) edges.push_back({name(r, c), name(r + 1, c), 1.0});
    }
  return WeightedGraph::build(edges);
}

WeightedGraph generate_random(std::size_t n, double edge_prob,
                              std::uint64_t seed) {
  if (n < 2)
    throw Error(ErrorCode::degenerate_size,
                "random graph needs at least 2 vertices");
  if (!(edge_prob > 0.0) || edge_prob > 1.0)
    throw Error(ErrorCode::invalid_argument,
                "edge probability must be in (0, 1]");
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt));
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.next_double() < edge_prob)
          edges.push_back({"v" + padded(i, n), "v" + padded(j, n), 1.0});
    if (edges.empty()) continue;
    WeightedGraph g = WeightedGraph::build(edges);
    if (g.vertex_count() == n && g.connected()) return g;
  }
  throw Error(ErrorCode::disconnected_after_retries,
              "no connected graph on " + std::to_string(n) +
                  " vertices after 64 attempts");
}

WeightedGraph parse_edge_list(const std::string& text) {
  std::vector<Edge> edges;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string a, b, w_tok;
    if (!(ls >> a)) continue;  // blank or comment-only line
    auto fail = [lineno](ErrorCode code, const std::string& what) -> Error {
      return Error(code, "line " + std::to_string(lineno) + ": " + what);
    };
    if (!(ls >> b >> w_tok))
      throw fail(ErrorCode::edge_list_parse, "expected '<id> <id> <weight>'");
    std::string trailing;
    if (ls >> trailing)
      throw fail(ErrorCode::edge_list_parse,
                 "unexpected trailing token '" + trailing + "'");
    double w = 0.0;
    auto res = std::from_chars(w_tok.data(), w_tok.data() + w_tok.size(), w);
    if (res.ec != std::errc() || res.ptr != w_tok.data() + w_tok.size())
      throw fail(ErrorCode::edge_list_parse, "bad weight '" + w_tok + "'");
    if (a == b)
      throw fail(ErrorCode::self_loop, "self loop at vertex '" + a + "'");
    if (!(w > 0.0) || !std::isfinite(w))
      throw fail(ErrorCode::nonpositive_weight,
                 "weight " + w_tok + " is not positive");
    edges.push_back({a, b, w});
  }
  return WeightedGraph::build(edges);
}

WeightedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

DirichletDomain::DirichletDomain(std::shared_ptr<const WeightedGraph> graph,
                                 std::vector<std::size_t> interior,
                                 const std::map<std::size_t, double>& boundary_data)
    : graph_(std::move(graph)), interior_(std::move(interior)) {
  if (!graph_) throw Error(ErrorCode::invalid_argument, "null graph");
  std::sort(interior_.begin(), interior_.end());
  interior_.erase(std::unique(interior_.begin(), interior_.end()),
                  interior_.end());
  if (interior_.empty())
    throw Error(ErrorCode::empty_interior, "interior set is empty");

  boundary_ = boundary_of(*graph_, interior_);
  if (!induced_connected(*graph_, interior_))
    throw Error(ErrorCode::not_connected, "induced interior subgraph is disconnected");

  boundary_values_.assign(boundary_.size(), 0.0);
  for (const auto& [v, value] : boundary_data) {
    auto it = std::lower_bound(boundary_.begin(), boundary_.end(), v);
    if (it == boundary_.end() || *it != v)
      throw Error(ErrorCode::missing_boundary_data,
                  "vertex index " + std::to_string(v) +
                      " is not on the boundary");
    if (!std::isfinite(value))
      throw Error(ErrorCode::non_finite_value, "non-finite boundary value");
    boundary_values_[static_cast<std::size_t>(it - boundary_.begin())] = value;
    if (value != 0.0) zero_boundary_ = false;
  }

  interior_ids_.reserve(interior_.size());
  for (std::size_t v : interior_) interior_ids_.push_back(graph_->vertex_id(v));

  slot_of_.assign(graph_->vertex_count(), npos);
  for (std::size_t s = 0; s < interior_.size(); ++s) slot_of_[interior_[s]] = s;
  std::vector<std::size_t> bslot(graph_->vertex_count(), npos);
  for (std::size_t s = 0; s < boundary_.size(); ++s) bslot[boundary_[s]] = s;

  const std::size_t m = interior_.size();
  ioffsets_.assign(m + 1, 0);
  boffsets_.assign(m + 1, 0);
  inv_measure_.assign(m, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    std::size_t v = interior_[s];
    inv_measure_[s] = 1.0 / graph_->measure(v);
    for (const auto& nb : graph_->neighbors(v)) {
      if (slot_of_[nb.vertex] != npos)
        ilinks_.push_back({slot_of_[nb.vertex], nb.weight});
      else
        blinks_.push_back({boundary_values_[bslot[nb.vertex]], nb.weight});
    }
    ioffsets_[s + 1] = ilinks_.size();
    boffsets_[s + 1] = blinks_.size();
  }
}

std::size_t DirichletDomain::interior_slot(std::size_t graph_vertex) const {
  if (graph_vertex >= slot_of_.size()) return npos;
  return slot_of_[graph_vertex];
}

}  // namespace plab
