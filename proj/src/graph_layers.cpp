#include "mlop/graph_layers.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "mlop/errors.hpp"

namespace mlop {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

Edge::Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {
  if (a == b) throw ContractViolation("edge endpoints must differ");
}

LayerGraph::LayerGraph(std::size_t n) : n_(n), adjacency_(n * n, false) {}

LayerGraph::LayerGraph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), adjacency_(n * n, false) {
  for (const Edge& e : edges_) {
    if (e.u == e.v) throw ContractViolation("self-loop in layer graph");
    if (e.v >= n_) throw ContractViolation("edge endpoint out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const Edge& e : edges_) {
    adjacency_[e.u * n_ + e.v] = true;
    adjacency_[e.v * n_ + e.u] = true;
  }
}

bool LayerGraph::has_edge(Vertex a, Vertex b) const noexcept {
  if (a >= n_ || b >= n_) return false;
  return adjacency_[static_cast<std::size_t>(a) * n_ + b];
}

std::vector<Vertex> LayerGraph::neighbors(Vertex a) const {
  std::vector<Vertex> out;
  for (Vertex b = 0; b < n_; ++b)
    if (has_edge(a, b)) out.push_back(b);
  return out;
}

MultilayerTopology::MultilayerTopology(std::vector<LayerGraph> layers)
    : layers_(std::move(layers)) {
  if (layers_.empty()) throw ContractViolation("topology needs at least one layer");
  for (const LayerGraph& g : layers_)
    if (g.vertex_count() != layers_.front().vertex_count())
      throw ContractViolation("layers must share the vertex set");
}

LayerGraph generate_er(std::size_t n, double p, Rng& rng, bool force_chain) {
  if (n < 1) throw ConfigError("graph: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("graph.p: must lie in [0, 1]");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (force_chain && v == u + 1) {
        edges.emplace_back(u, v);
      } else if (rng.bernoulli(p)) {
        edges.emplace_back(u, v);
      }
    }
  }
  return LayerGraph(n, std::move(edges));
}

std::vector<std::uint32_t> component_labels(const LayerGraph& g) {
  const std::size_t n = g.vertex_count();
  DisjointSets sets(n);
  for (const Edge& e : g.edges()) sets.unite(e.u, e.v);
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> root_label(n, unset);
  std::vector<std::uint32_t> labels(n);
  std::uint32_t next = 0;
  for (Vertex a = 0; a < n; ++a) {
    const auto r = sets.find(a);
    if (root_label[r] == unset) root_label[r] = next++;
    labels[a] = root_label[r];
  }
  return labels;
}

std::vector<std::vector<Vertex>> connected_components(const LayerGraph& g) {
  const auto labels = component_labels(g);
  std::uint32_t count = 0;
  for (auto l : labels) count = std::max(count, l + 1);
  std::vector<std::vector<Vertex>> parts(count);
  for (Vertex a = 0; a < labels.size(); ++a) parts[labels[a]].push_back(a);
  return parts;
}

LayerGraph spanning_forest(const LayerGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> seen(n, false);
  std::vector<Edge> tree;
  std::queue<Vertex> frontier;
  for (Vertex root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    frontier.push(root);
    while (!frontier.empty()) {
      const Vertex a = frontier.front();
      frontier.pop();
      for (Vertex b : g.neighbors(a)) {
        if (seen[b]) continue;
        seen[b] = true;
        tree.emplace_back(a, b);
        frontier.push(b);
      }
    }
  }
  return LayerGraph(n, std::move(tree));
}

bool is_connected(const LayerGraph& g) {
  return connected_components(g).size() == 1;
}

std::string format_topology(const MultilayerTopology& topo) {
  std::ostringstream out;
  for (std::size_t k = 0; k < topo.layer_count(); ++k) {
    out << "layer " << (k + 1) << ':';
    const char* sep = " ";
    for (const Edge& e : topo.layer(k).edges()) {
      out << sep << (e.u + 1) << '-' << (e.v + 1);
      sep = ",";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mlop
