#pragma once

// Per-step multilayer social topology: simple undirected layer graphs on a
// shared vertex set, Erdos-Renyi generation with an optional forced chain,
// connected components and BFS spanning forests.
//
// Vertices are 0-based here; every external format is 1-based.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlop/rng.hpp"

namespace mlop {

using Vertex = std::uint32_t;

/// Undirected edge, always stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  /// Canonicalizes the endpoint order. Throws ContractViolation on a loop.
  Edge(Vertex a, Vertex b);

  bool is_chain() const noexcept { return v == u + 1; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on {0, ..., n-1}.
class LayerGraph {
 public:
  explicit LayerGraph(std::size_t n = 0);
  /// Duplicate edges are collapsed; endpoints must be < n.
  LayerGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  /// Edges in ascending canonical order.
  std::span<const Edge> edges() const noexcept { return edges_; }

  bool has_edge(Vertex a, Vertex b) const noexcept;
  bool has_edge(const Edge& e) const noexcept { return has_edge(e.u, e.v); }

  /// Ascending neighbor list of vertex a.
  std::vector<Vertex> neighbors(Vertex a) const;

  friend bool operator==(const LayerGraph& a, const LayerGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<bool> adjacency_;  // n*n, symmetric
};

/// One graph per layer, all on the same vertex set; at least one layer.
class MultilayerTopology {
 public:
  explicit MultilayerTopology(std::vector<LayerGraph> layers);

  std::size_t layer_count() const noexcept { return layers_.size(); }
  std::size_t vertex_count() const noexcept { return layers_.front().vertex_count(); }
  const LayerGraph& layer(std::size_t k) const { return layers_.at(k); }
  std::span<const LayerGraph> layers() const noexcept { return layers_; }

 private:
  std::vector<LayerGraph> layers_;
};

/// Erdos-Renyi G(n, p). With force_chain, every edge (i, i+1) is present and
/// only the remaining pairs are drawn with probability p. Pairs are visited
/// in ascending canonical order, one uniform draw per non-forced pair.
LayerGraph generate_er(std::size_t n, double p, Rng& rng, bool force_chain);

inline LayerGraph generate_er_with_chain(std::size_t n, double p, Rng& rng) {
  return generate_er(n, p, rng, true);
}

/// Partition into maximal connected vertex sets. Each part is ascending and
/// parts are ordered by their smallest vertex.
std::vector<std::vector<Vertex>> connected_components(const LayerGraph& g);

/// Component label per vertex, labels numbered in order of smallest vertex.
std::vector<std::uint32_t> component_labels(const LayerGraph& g);

/// Breadth-first spanning forest: roots are taken in ascending order among
/// unvisited vertices and neighbors are expanded in ascending order.
LayerGraph spanning_forest(const LayerGraph& g);

bool is_connected(const LayerGraph& g);

/// `layer k: u-v,u-v,...` lines (1-based, ascending), one per layer.
std::string format_topology(const MultilayerTopology& topo);

}  // namespace mlop
