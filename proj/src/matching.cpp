#include "mlop/matching.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mlop/errors.hpp"

namespace mlop {

namespace {

// Uniform sampler restricted to the given vertex pool.
void append_uniform_pairs(std::vector<Vertex> pool, Rng& rng, std::vector<Edge>& out) {
  for (std::size_t i = pool.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(pool[i - 1], pool[j]);
  }
  for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
    if (rng.bernoulli(0.5)) out.emplace_back(pool[i], pool[i + 1]);
  }
}

}  // namespace

Matching::Matching(std::vector<Edge> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  std::vector<Vertex> used;
  used.reserve(2 * pairs_.size());
  for (const Edge& e : pairs_) {
    used.push_back(e.u);
    used.push_back(e.v);
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end())
    throw ContractViolation("matching pairs must be vertex-disjoint");
}

bool Matching::contains_chain_edge() const noexcept {
  return std::any_of(pairs_.begin(), pairs_.end(), [](const Edge& e) { return e.is_chain(); });
}

std::string_view to_string(MatcherLaw law) noexcept {
  switch (law) {
    case MatcherLaw::uniform: return "uniform";
    case MatcherLaw::chain_forced: return "chain_forced";
    case MatcherLaw::empty: return "empty";
  }
  return "?";
}

std::optional<MatcherLaw> parse_matcher_law(std::string_view name) noexcept {
  if (name == "uniform") return MatcherLaw::uniform;
  if (name == "chain_forced") return MatcherLaw::chain_forced;
  if (name == "empty") return MatcherLaw::empty;
  return std::nullopt;
}

Matching sample_uniform_matching(std::size_t n, Rng& rng) {
  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  std::vector<Edge> pairs;
  append_uniform_pairs(std::move(pool), rng, pairs);
  return Matching(std::move(pairs));
}

Matching sample_matching_with_chain_edge(std::size_t n, Rng& rng) {
  if (n < 2) throw ContractViolation("chain-forced matching needs n >= 2");
  const auto i = static_cast<Vertex>(rng.below(n - 1));
  std::vector<Edge> pairs{Edge(i, i + 1)};
  std::vector<Vertex> pool;
  pool.reserve(n - 2);
  for (Vertex a = 0; a < n; ++a)
    if (a != i && a != i + 1) pool.push_back(a);
  append_uniform_pairs(std::move(pool), rng, pairs);
  return Matching(std::move(pairs));
}

Matching sample_matching(MatcherLaw law, std::size_t n, Rng& rng) {
  switch (law) {
    case MatcherLaw::uniform: return sample_uniform_matching(n, rng);
    case MatcherLaw::chain_forced: return sample_matching_with_chain_edge(n, rng);
    case MatcherLaw::empty: return Matching{};
  }
  return Matching{};
}

ActiveSet derive_active_set(const Matching& u, const MultilayerTopology& topo) {
  ActiveSet active;
  for (const Edge& e : u.pairs()) {
    if (e.v >= topo.vertex_count())
      throw ContractViolation("matching vertex outside topology");
    ActivePair pair{e, {}};
    for (LayerIndex k = 0; k < topo.layer_count(); ++k)
      if (topo.layer(k).has_edge(e)) pair.layers.push_back(k);
    if (!pair.layers.empty()) active.pairs.push_back(std::move(pair));
  }
  return active;
}

bool is_connected_collection(const ActiveSet& a, std::size_t m) {
  if (a.empty() || m == 0) return false;
  std::vector<bool> covered(m, false);
  for (const ActivePair& p : a.pairs) {
    for (LayerIndex k : p.layers) {
      if (k >= m) throw ContractViolation("layer index outside [m]");
      covered[k] = true;
    }
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) return false;

  // Flood the overlap graph through layers: a pair reaches every layer it
  // belongs to, and a layer reaches every pair containing it.
  const std::size_t count = a.size();
  std::vector<bool> pair_seen(count, false);
  std::vector<bool> layer_seen(m, false);
  std::vector<std::size_t> stack{0};
  pair_seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    for (LayerIndex k : a.pairs[cur].layers) {
      if (layer_seen[k]) continue;
      layer_seen[k] = true;
      for (std::size_t other = 0; other < count; ++other) {
        if (pair_seen[other]) continue;
        const auto& ls = a.pairs[other].layers;
        if (std::binary_search(ls.begin(), ls.end(), k)) {
          pair_seen[other] = true;
          ++reached;
          stack.push_back(other);
        }
      }
    }
  }
  return reached == count;
}

std::string format_matching_line(std::uint64_t t, const Matching& u, const ActiveSet& active) {
  std::ostringstream out;
  out << t << ':';
  const char* sep = " ";
  auto it = active.pairs.begin();
  for (const Edge& e : u.pairs()) {
    out << sep << '(' << (e.u + 1) << ',' << (e.v + 1) << ")[";
    sep = ";";
    if (it != active.pairs.end() && it->edge == e) {
      const char* lsep = "";
      for (LayerIndex k : it->layers) {
        out << lsep << (k + 1);
        lsep = ",";
      }
      ++it;
    }
    out << ']';
  }
  return out.str();
}

}  // namespace mlop
