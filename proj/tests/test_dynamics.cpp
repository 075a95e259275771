#include <doctest.h>

#include <cmath>

#include "mlop/diagnostics.hpp"
#include "mlop/dynamics.hpp"
#include "mlop/errors.hpp"
#include "oracles.hpp"

using namespace mlop;

namespace {

RatePolicy fixed_policy(double mu, double theta) {
  return RatePolicy::uniform({MuLaw::point(mu), ThetaLaw::point(theta)});
}

RatePolicy mixed_policy() {
  return RatePolicy::uniform({MuLaw::uniform(0.05, 0.5), ThetaLaw::uniform(0.0, 1.0)});
}

MultilayerTopology complete_layers(std::size_t n, std::size_t m) {
  std::vector<LayerGraph> layers;
  Rng rng(0);
  for (std::size_t k = 0; k < m; ++k) layers.push_back(generate_er(n, 1.0, rng, false));
  return MultilayerTopology(layers);
}

// Direct transcription of the pair update for one agent, used as oracle.
std::vector<double> eq1(const OpinionState& x, const ActivePair& pair,
                        const std::vector<RateDraw>& draws, bool for_u) {
  const auto self = for_u ? pair.edge.u : pair.edge.v;
  const auto other = for_u ? pair.edge.v : pair.edge.u;
  std::vector<double> acc(x.dim(), 0.0);
  for (std::size_t s = 0; s < pair.layers.size(); ++s)
    for (std::size_t c = 0; c < x.dim(); ++c) {
      const double a = x.at(pair.layers[s], self)[c];
      const double b = x.at(pair.layers[s], other)[c];
      acc[c] += a + draws[s].r * (b - a);
    }
  for (double& v : acc) v /= static_cast<double>(pair.layers.size());
  return acc;
}

double relative_total_change(const OpinionState& a, const OpinionState& b) {
  const auto ta = a.total();
  const auto tb = b.total();
  double diff = 0.0, scale = 0.0;
  for (std::size_t c = 0; c < ta.size(); ++c) diff += std::abs(ta[c] - tb[c]);
  for (double v : a.values()) scale += std::abs(v);
  return diff / std::max(scale, 1e-300);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("draw_rate with degenerate laws") {
  const auto attract = fixed_policy(0.5, 1.0);
  const auto repel = fixed_policy(0.3, 0.0);
  for (std::uint64_t t = 0; t < 200; ++t) {
    CHECK(draw_rate(attract, 0, Edge(0, 5), t, 3).r == 0.5);
    CHECK(draw_rate(repel, 1, Edge(2, 3), t, 3).r == -0.3);
  }
}

TEST_CASE("draw_rate mean matches mu (2 theta - 1)") {
  const auto policy = fixed_policy(0.3, 0.7);
  constexpr int draws = 100000;
  double sum = 0.0;
  for (int t = 0; t < draws; ++t) sum += draw_rate(policy, 0, Edge(0, 1), t, 11).r;
  const double expected = 0.3 * (2.0 * 0.7 - 1.0);
  const double se = std::sqrt((0.09 - expected * expected) / draws);
  CHECK(std::abs(sum / draws - expected) < 3.0 * se);
}

TEST_CASE("draw_rate is keyed by (seed, t, layer, edge)") {
  const auto policy = mixed_policy();
  const auto a = draw_rate(policy, 1, Edge(3, 4), 17, 5);
  const auto b = draw_rate(policy, 1, Edge(4, 3), 17, 5);
  CHECK(a.r == b.r);
  CHECK(a.mu == b.mu);
  CHECK(draw_rate(policy, 2, Edge(3, 4), 17, 5).mu != a.mu);
  CHECK(draw_rate(policy, 1, Edge(3, 4), 18, 5).mu != a.mu);
  CHECK(draw_rate(policy, 1, Edge(3, 4), 17, 6).mu != a.mu);
}

TEST_CASE("draw_rate respects supports and class laws") {
  RatePolicy p;
  p.chain = {MuLaw::uniform(0.1, 0.5), ThetaLaw::biased(1.1)};
  p.other = {MuLaw::uniform(0.0, 0.5), ThetaLaw::biased(1.0)};
  p.validate();
  for (std::uint64_t t = 0; t < 5000; ++t) {
    const auto c = draw_rate(p, 0, Edge(4, 5), t, 1);
    CHECK(c.mu >= 0.1);
    CHECK(c.mu < 0.5);
    CHECK(c.theta >= (1.1 + c.mu) / 2.0);
    CHECK(c.theta <= 1.0);
    CHECK(std::abs(c.r) == c.mu);
    const auto o = draw_rate(p, 0, Edge(4, 9), t, 1);
    CHECK(o.mu > 0.0);
    CHECK(o.mu <= 0.5);
    CHECK(o.theta >= (1.0 + o.mu) / 2.0);
  }
}

TEST_CASE("rate law validation") {
  CHECK_THROWS_AS(MuLaw::uniform(0.1, 0.6).validate("mu"), ConfigError);
  CHECK_THROWS_AS(MuLaw::point(0.0).validate("mu"), ConfigError);
  CHECK_THROWS_AS(MuLaw::point(0.51).validate("mu"), ConfigError);
  CHECK_THROWS_AS(MuLaw::uniform(-0.1, 0.4).validate("mu"), ConfigError);
  CHECK_NOTHROW(MuLaw::uniform(0.0, 0.5).validate("mu"));
  CHECK_THROWS_AS(ThetaLaw::point(1.2).validate(MuLaw::point(0.3), "theta"), ConfigError);
  CHECK_THROWS_AS(ThetaLaw::uniform(0.5, 1.1).validate(MuLaw::point(0.3), "theta"), ConfigError);
  CHECK_THROWS_AS(ThetaLaw::biased(1.8).validate(MuLaw::uniform(0.1, 0.5), "theta"), ConfigError);
  try {
    RatePolicy::uniform({MuLaw::uniform(0.1, 0.6), ThetaLaw::point(1.0)}).validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("rates.chain.mu") != std::string::npos);
  }
}

TEST_CASE("update_pair examples") {
  const ActivePair single{Edge(0, 1), {0}};
  SUBCASE("maximal attraction meets at the midpoint") {
    OpinionState x(2, 1, 1, {0.0, 1.0});
    update_pair(x, single, std::vector<RateDraw>{{0.5, 1.0, 0.5}});
    CHECK(x.at(0, 0)[0] == 0.5);
    CHECK(x.at(0, 1)[0] == 0.5);
  }
  SUBCASE("maximal repulsion") {
    OpinionState x(2, 1, 1, {0.0, 1.0});
    update_pair(x, single, std::vector<RateDraw>{{0.5, 0.0, -0.5}});
    CHECK(x.at(0, 0)[0] == -0.5);
    CHECK(x.at(0, 1)[0] == 1.5);
  }
  SUBCASE("two layers are averaged") {
    // layer 0: (0, 1), layer 1: (2, 4)
    OpinionState x(2, 2, 1, {0.0, 1.0, 2.0, 4.0});
    const ActivePair pair{Edge(0, 1), {0, 1}};
    update_pair(x, pair, std::vector<RateDraw>{{0.5, 1.0, 0.5}, {0.25, 1.0, 0.25}});
    CHECK(x.at(0, 0)[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(x.at(1, 0)[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(x.at(0, 1)[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(x.at(1, 1)[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(x.at(0, 0)[0] + x.at(1, 0)[0] + x.at(0, 1)[0] + x.at(1, 1)[0] == doctest::Approx(7.0));
  }
  SUBCASE("contract violations") {
    OpinionState x(2, 1, 1, {0.0, 1.0});
    CHECK_THROWS_AS(update_pair(x, ActivePair{Edge(0, 1), {}}, {}), ContractViolation);
    CHECK_THROWS_AS(update_pair(x, single, {}), ContractViolation);
  }
}

TEST_CASE("update_pair matches the averaged formula and leaves other slots alone") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(6), m = 1 + rng.below(3), d = 1 + rng.below(3);
    auto x = oracle::random_state(n, m, d, 10.0, rng);
    const Vertex a = static_cast<Vertex>(rng.below(n));
    Vertex b = static_cast<Vertex>(rng.below(n - 1));
    if (b >= a) ++b;
    ActivePair pair{Edge(a, b), {}};
    for (LayerIndex k = 0; k < m; ++k)
      if (rng.bernoulli(0.6)) pair.layers.push_back(k);
    if (pair.layers.empty()) pair.layers.push_back(0);
    std::vector<RateDraw> draws;
    for (std::size_t s = 0; s < pair.layers.size(); ++s) {
      const double mu = rng.uniform(0.01, 0.5);
      draws.push_back({mu, 0.5, rng.bernoulli(0.5) ? mu : -mu});
    }
    const auto want_u = eq1(x, pair, draws, true);
    const auto want_v = eq1(x, pair, draws, false);
    const auto before = x;
    update_pair(x, pair, draws);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const bool in_layers = std::find(pair.layers.begin(), pair.layers.end(), k) != pair.layers.end();
        const bool touched = in_layers && (i == pair.edge.u || i == pair.edge.v);
        for (std::size_t c = 0; c < d; ++c) {
          if (!touched) {
            CHECK(x.at(k, i)[c] == before.at(k, i)[c]);
          } else {
            const double want = i == pair.edge.u ? want_u[c] : want_v[c];
            CHECK(x.at(k, i)[c] == doctest::Approx(want).epsilon(1e-12));
          }
        }
      }
    CHECK(relative_total_change(before, x) < 1e-12);
  }
}

TEST_CASE("single layer with r = +mu is pairwise gossip averaging") {
  OpinionState x(3, 1, 1, {2.0, -1.0, 5.0});
  update_pair(x, ActivePair{Edge(0, 2), {0}}, std::vector<RateDraw>{{0.25, 1.0, 0.25}});
  CHECK(x.at(0, 0)[0] == doctest::Approx(2.0 + 0.25 * (5.0 - 2.0)));
  CHECK(x.at(0, 2)[0] == doctest::Approx(5.0 + 0.25 * (2.0 - 5.0)));
  CHECK(x.at(0, 1)[0] == -1.0);
}

TEST_CASE("step with the empty matching changes nothing") {
  Rng rng(3);
  auto x = oracle::random_state(5, 2, 2, 3.0, rng);
  const auto before = x;
  const auto trace = step(x, complete_layers(5, 2), Matching{}, mixed_policy(), 0, 1);
  CHECK(x == before);
  CHECK(trace.active.empty());
  CHECK(trace.w_before == trace.w_after);
}

TEST_CASE("step with one active attractive pair conserves the total") {
  OpinionState x(4, 3, 1, {0.1, 0.9, 0.3, 0.7, 1.5, -0.2, 0.4, 0.0, 2.0, 0.6, -1.0, 0.8});
  const auto before = x;
  const auto trace = step(x, complete_layers(4, 3), Matching({Edge(1, 2)}), fixed_policy(0.4, 1.0), 0, 9);
  REQUIRE(trace.active.size() == 1);
  CHECK(trace.active.pairs[0].layers.size() == 3);
  CHECK(relative_total_change(before, x) < 1e-12);
  CHECK(trace.w_after <= trace.w_before);
}

TEST_CASE("disjoint pairs commute bit-for-bit") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = oracle::random_state(6, 2, 2, 5.0, rng);
    const ActivePair p{Edge(0, 3), {0, 1}};
    const ActivePair q{Edge(1, 5), {1}};
    const std::vector<RateDraw> dp{{0.3, 0.5, -0.3}, {0.2, 0.5, 0.2}};
    const std::vector<RateDraw> dq{{0.45, 0.5, 0.45}};
    auto forward = x;
    update_pair(forward, p, dp);
    update_pair(forward, q, dq);
    auto backward = x;
    update_pair(backward, q, dq);
    update_pair(backward, p, dp);
    CHECK(forward == backward);
  }
}

TEST_CASE("random steps conserve the total and stay finite") {
  Rng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(8), m = 1 + rng.below(3), d = 1 + rng.below(3);
    auto x = oracle::random_state(n, m, d, 4.0, rng);
    std::vector<LayerGraph> layers;
    for (std::size_t k = 0; k < m; ++k) layers.push_back(oracle::random_graph(n, 0.6, rng));
    const MultilayerTopology topo(layers);
    const auto u = sample_uniform_matching(n, rng);
    const auto before = x;
    step(x, topo, u, mixed_policy(), static_cast<std::uint64_t>(trial), 2);
    CHECK(relative_total_change(before, x) < 1e-9);
    CHECK(x.all_finite());
  }
}

TEST_CASE("pure attraction keeps every slot inside the previous hull") {
  Rng rng(45);
  const auto policy = RatePolicy::uniform({MuLaw::uniform(0.0, 0.5), ThetaLaw::point(1.0)});
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(8), m = 1 + rng.below(3);
    auto x = oracle::random_state(n, m, 1, 4.0, rng);
    std::vector<LayerGraph> layers;
    for (std::size_t k = 0; k < m; ++k) layers.push_back(oracle::random_graph(n, 0.6, rng));
    const auto u = sample_uniform_matching(n, rng);
    const auto values = x.values();
    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    const double spread = oracle::naive_max_pairwise(x);
    step(x, MultilayerTopology(layers), u, policy, 0, static_cast<std::uint64_t>(trial));
    for (double v : x.values()) {
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
    CHECK(oracle::naive_max_pairwise(x) <= spread + 1e-12);
  }
}

}
