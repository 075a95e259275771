#pragma once

// Random matchings of the complete graph K_n, the active interaction set
// derived from a matching and the current topology, and the "connected
// collection of all layers" predicate on that set.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlop/graph_layers.hpp"
#include "mlop/rng.hpp"

namespace mlop {

using LayerIndex = std::uint32_t;

/// Set of pairwise vertex-disjoint edges of K_n, kept in canonical order.
class Matching {
 public:
  Matching() = default;
  /// Throws ContractViolation if two pairs share a vertex.
  explicit Matching(std::vector<Edge> pairs);

  std::span<const Edge> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  bool contains_chain_edge() const noexcept;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<Edge> pairs_;
};

/// A matched pair together with the (ascending, nonempty) set of layers
/// whose graph contains it.
struct ActivePair {
  Edge edge;
  std::vector<LayerIndex> layers;

  friend bool operator==(const ActivePair&, const ActivePair&) = default;
};

/// Matched pairs that are socially connected in at least one layer, in
/// canonical edge order.
struct ActiveSet {
  std::vector<ActivePair> pairs;

  bool empty() const noexcept { return pairs.empty(); }
  std::size_t size() const noexcept { return pairs.size(); }
};

/// Matching laws selectable from a scenario.
enum class MatcherLaw {
  uniform,       // full support over all matchings of K_n
  chain_forced,  // always contains at least one chain edge (i, i+1)
  empty,         // degenerate law: always the empty matching
};

std::string_view to_string(MatcherLaw law) noexcept;
std::optional<MatcherLaw> parse_matcher_law(std::string_view name) noexcept;

/// Shuffles the vertices, pairs them off consecutively and keeps each
/// candidate pair independently with probability 1/2. Every matching of
/// K_n, the empty one included, has positive probability.
Matching sample_uniform_matching(std::size_t n, Rng& rng);

/// Picks one chain edge (i, i+1) uniformly, then runs the uniform sampler
/// on the remaining n - 2 vertices. Requires n >= 2.
Matching sample_matching_with_chain_edge(std::size_t n, Rng& rng);

Matching sample_matching(MatcherLaw law, std::size_t n, Rng& rng);

/// Layer set of every matched pair; pairs found in no layer are dropped.
ActiveSet derive_active_set(const Matching& u, const MultilayerTopology& topo);

/// True iff the layer sets of `a` cover all m layers and the overlap graph
/// (pairs adjacent when their layer sets intersect) is connected.
bool is_connected_collection(const ActiveSet& a, std::size_t m);

/// `t: (u,v)[k,l];(u,v)[k]` with 1-based indices. Pairs of `u` that are not
/// active are written with an empty layer list.
std::string format_matching_line(std::uint64_t t, const Matching& u, const ActiveSet& active);

}  // namespace mlop
