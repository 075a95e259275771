#include <doctest.h>

#include <map>
#include <set>

#include "mlop/errors.hpp"
#include "mlop/matching.hpp"
#include "oracles.hpp"

using namespace mlop;

namespace {

bool vertex_disjoint(const Matching& m) {
  std::set<Vertex> seen;
  for (const auto& e : m.pairs()) {
    if (!seen.insert(e.u).second || !seen.insert(e.v).second) return false;
  }
  return true;
}

std::vector<Edge> pairs_of(const Matching& m) { return {m.pairs().begin(), m.pairs().end()}; }

MultilayerTopology topo_with(std::size_t n, std::vector<std::vector<Edge>> layers) {
  std::vector<LayerGraph> gs;
  for (auto& l : layers) gs.emplace_back(n, l);
  return MultilayerTopology(std::move(gs));
}

ActiveSet from_layer_sets(const std::vector<std::vector<LayerIndex>>& sets) {
  ActiveSet a;
  Vertex next = 0;
  for (const auto& s : sets) {
    a.pairs.push_back({Edge(next, next + 1), s});
    next += 2;
  }
  return a;
}

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("matching rejects shared vertices") {
  CHECK_THROWS_AS(Matching({Edge(0, 1), Edge(1, 2)}), ContractViolation);
  Matching m({Edge(2, 3), Edge(0, 1)});
  CHECK(pairs_of(m) == std::vector<Edge>{{0, 1}, {2, 3}});
}

TEST_CASE("uniform sampler on n = 1 gives the empty matching") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    CHECK(sample_uniform_matching(1, rng).empty());
  }
}

TEST_CASE("uniform sampler on n = 2 reaches both matchings") {
  std::set<std::vector<Edge>> seen;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    Rng rng = Rng::keyed(s, Stream::matching, {0});
    seen.insert(pairs_of(sample_uniform_matching(2, rng)));
  }
  CHECK(seen.size() == 2);
  CHECK(seen.count({}) == 1);
  CHECK(seen.count({Edge(0, 1)}) == 1);
}

TEST_CASE("uniform sampler on K_4 covers all matchings") {
  const auto all = oracle::all_matchings(4);
  REQUIRE(all.size() == 10);
  const std::set<std::vector<Edge>> universe(all.begin(), all.end());
  std::set<std::vector<Edge>> seen;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    Rng rng = Rng::keyed(s, Stream::matching, {0});
    const auto m = sample_uniform_matching(4, rng);
    REQUIRE(vertex_disjoint(m));
    REQUIRE(universe.count(pairs_of(m)) == 1);
    seen.insert(pairs_of(m));
  }
  CHECK(seen == universe);
}

TEST_CASE("chain-forced sampler") {
  SUBCASE("n = 2 always yields the single chain edge") {
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng(s);
      CHECK(pairs_of(sample_matching_with_chain_edge(2, rng)) == std::vector<Edge>{{0, 1}});
    }
  }
  SUBCASE("n = 4 always contains a chain edge") {
    for (std::uint64_t s = 0; s < 2000; ++s) {
      Rng rng(s);
      const auto m = sample_matching_with_chain_edge(4, rng);
      CHECK(m.contains_chain_edge());
      CHECK(vertex_disjoint(m));
    }
  }
  SUBCASE("n = 6 covers every edge of K_6") {
    std::set<Edge> seen;
    for (std::uint64_t s = 0; s < 10000; ++s) {
      Rng rng = Rng::keyed(s, Stream::matching, {0});
      const auto m = sample_matching_with_chain_edge(6, rng);
      REQUIRE(m.contains_chain_edge());
      for (const auto& e : m.pairs()) seen.insert(e);
    }
    CHECK(seen.size() == 15);
  }
  Rng rng(1);
  CHECK_THROWS_AS(sample_matching_with_chain_edge(1, rng), ContractViolation);
}

TEST_CASE("active set examples") {
  SUBCASE("pair present in layers 1 and 3") {
    const auto topo = topo_with(4, {{Edge(0, 1)}, {}, {Edge(0, 1)}});
    const auto a = derive_active_set(Matching({Edge(0, 1)}), topo);
    REQUIRE(a.size() == 1);
    CHECK(a.pairs[0].edge == Edge(0, 1));
    CHECK(a.pairs[0].layers == std::vector<LayerIndex>{0, 2});
  }
  SUBCASE("pair in no layer is dropped") {
    const auto topo = topo_with(4, {{Edge(1, 2)}, {}});
    CHECK(derive_active_set(Matching({Edge(0, 1)}), topo).empty());
  }
  SUBCASE("two pairs") {
    const auto topo = topo_with(4, {{Edge(0, 1), Edge(2, 3)}, {Edge(2, 3)}});
    const auto a = derive_active_set(Matching({Edge(0, 1), Edge(2, 3)}), topo);
    REQUIRE(a.size() == 2);
    CHECK(a.pairs[0].layers == std::vector<LayerIndex>{0});
    CHECK(a.pairs[1].layers == std::vector<LayerIndex>{0, 1});
  }
}

TEST_CASE("removing a layer edge never adds an active pair") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    std::vector<LayerGraph> layers;
    for (int k = 0; k < 3; ++k) layers.push_back(oracle::random_graph(n, 0.5, rng));
    const MultilayerTopology full(layers);
    const auto u = sample_uniform_matching(n, rng);
    const auto before = derive_active_set(u, full);

    const std::size_t k = rng.below(3);
    if (layers[k].edge_count() == 0) continue;
    std::vector<Edge> kept(layers[k].edges().begin(), layers[k].edges().end());
    kept.erase(kept.begin() + static_cast<long>(rng.below(kept.size())));
    layers[k] = LayerGraph(n, kept);
    const auto after = derive_active_set(u, MultilayerTopology(layers));

    CHECK(after.size() <= before.size());
    for (const auto& p : after.pairs) {
      const auto it = std::find_if(before.pairs.begin(), before.pairs.end(),
                                   [&](const ActivePair& q) { return q.edge == p.edge; });
      REQUIRE(it != before.pairs.end());
      CHECK(std::includes(it->layers.begin(), it->layers.end(), p.layers.begin(), p.layers.end()));
    }
  }
}

TEST_CASE("connected collection examples") {
  CHECK_FALSE(is_connected_collection(from_layer_sets({{0}, {1}}), 2));
  CHECK(is_connected_collection(from_layer_sets({{0, 1}}), 2));
  CHECK_FALSE(is_connected_collection(ActiveSet{}, 1));
  CHECK_FALSE(is_connected_collection(from_layer_sets({{0}}), 2));
  CHECK(is_connected_collection(from_layer_sets({{0}, {0, 1}, {1, 2}}), 3));
}

TEST_CASE("connected collection matches exhaustive oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 3;
    const std::size_t count = rng.below(6);
    std::vector<std::vector<LayerIndex>> sets(count);
    for (auto& s : sets) {
      for (LayerIndex k = 0; k < m; ++k)
        if (rng.bernoulli(0.4)) s.push_back(k);
      if (s.empty()) s.push_back(static_cast<LayerIndex>(rng.below(m)));
    }
    const bool expected = oracle::connected_collection(sets, m);
    CHECK(is_connected_collection(from_layer_sets(sets), m) == expected);

    // Same layer sets on different vertices give the same answer.
    ActiveSet moved;
    Vertex base = 20;
    for (const auto& s : sets) {
      moved.pairs.push_back({Edge(base + 1, base), s});
      base += 3;
    }
    CHECK(is_connected_collection(moved, m) == expected);
  }
}

TEST_CASE("matching dump line") {
  const auto topo = topo_with(4, {{Edge(0, 1)}, {Edge(0, 1)}});
  const Matching u({Edge(0, 1), Edge(2, 3)});
  CHECK(format_matching_line(7, u, derive_active_set(u, topo)) == "7: (1,2)[1,2];(3,4)[]");
  CHECK(format_matching_line(0, Matching{}, ActiveSet{}) == "0:");
}

}
