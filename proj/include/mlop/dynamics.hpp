#pragma once

// Opinion state and the synchronous per-step update: every active pair
// draws a signed rate per shared layer, moves toward (r > 0) or away from
// (r < 0) its partner in each of those layers, and the per-layer results are
// averaged so all shared layers end the step with the same value.

#include <cstdint>
#include <span>
#include <vector>

#include "mlop/graph_layers.hpp"
#include "mlop/matching.hpp"
#include "mlop/rng.hpp"

namespace mlop {

/// x[k][i] in R^d for layer k < m and agent i < n, stored layer-major.
class OpinionState {
 public:
  OpinionState() = default;
  OpinionState(std::size_t n, std::size_t m, std::size_t d);
  /// `values` holds m*n*d entries ordered (layer, agent, dim).
  OpinionState(std::size_t n, std::size_t m, std::size_t d, std::vector<double> values);

  std::size_t agents() const noexcept { return n_; }
  std::size_t layers() const noexcept { return m_; }
  std::size_t dim() const noexcept { return d_; }
  std::size_t slots() const noexcept { return n_ * m_; }

  std::span<double> at(std::size_t layer, std::size_t agent) noexcept {
    return {data_.data() + (layer * n_ + agent) * d_, d_};
  }
  std::span<const double> at(std::size_t layer, std::size_t agent) const noexcept {
    return {data_.data() + (layer * n_ + agent) * d_, d_};
  }

  std::span<const double> values() const noexcept { return data_; }

  /// Sum over every (layer, agent) slot, a vector in R^d.
  std::vector<double> total() const;
  bool all_finite() const noexcept;

  friend bool operator==(const OpinionState&, const OpinionState&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t d_ = 0;
  std::vector<double> data_;
};

/// Law of the interaction strength mu. Support must lie in (0, 1/2].
struct MuLaw {
  enum class Kind { point, uniform };
  Kind kind = Kind::point;
  double a = 0.5;  // point value, or lower bound
  double b = 0.5;  // upper bound (uniform)

  static MuLaw point(double v) { return {Kind::point, v, v}; }
  static MuLaw uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }

  /// Infimum of the support.
  double lower() const noexcept { return a; }
  double upper() const noexcept { return kind == Kind::point ? a : b; }
  /// Throws ConfigError naming `field` when the support leaves (0, 1/2].
  void validate(const char* field) const;
  /// Exact zeros (possible only when a == 0) are redrawn.
  double sample(Rng& rng) const;
};

/// Law of the attraction probability theta, possibly conditioned on mu.
struct ThetaLaw {
  enum class Kind {
    point,     // theta = a
    uniform,   // theta ~ Unif(a, b)
    biased,    // theta ~ Unif((a + mu) / 2, 1)
  };
  Kind kind = Kind::point;
  double a = 1.0;
  double b = 1.0;

  static ThetaLaw point(double v) { return {Kind::point, v, v}; }
  static ThetaLaw uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
  static ThetaLaw biased(double offset) { return {Kind::biased, offset, 1.0}; }

  /// Throws ConfigError naming `field` when some theta could leave [0, 1]
  /// for a mu drawn from `mu`.
  void validate(const MuLaw& mu, const char* field) const;
  double sample(double mu, Rng& rng) const;
};

struct EdgeClassLaw {
  MuLaw mu;
  ThetaLaw theta;
};

/// Rate laws per edge class. An edge (i, i+1) is a chain edge; all others
/// use the `other` law.
struct RatePolicy {
  EdgeClassLaw chain;
  EdgeClassLaw other;

  const EdgeClassLaw& law_for(const Edge& e) const noexcept {
    return e.is_chain() ? chain : other;
  }
  void validate() const;

  /// Same law for every edge.
  static RatePolicy uniform(EdgeClassLaw law) { return {law, law}; }
};

struct RateDraw {
  double mu = 0.0;
  double theta = 0.0;
  double r = 0.0;  // +mu with probability theta, otherwise -mu
};

/// Draw for one (layer, edge) at time t. The stream is keyed by
/// (seed, t, layer, edge), so it is independent of iteration order.
RateDraw draw_rate(const RatePolicy& policy, LayerIndex layer, const Edge& edge,
                   std::uint64_t t, std::uint64_t seed);

/// Applies one pair's update in place. `draws[s]` belongs to layer
/// `pair.layers[s]`. Slots outside the pair's agents and layers are untouched.
void update_pair(OpinionState& state, const ActivePair& pair, std::span<const RateDraw> draws);

/// What happened during one step; consumed by the diagnostics.
struct StepTrace {
  std::uint64_t t = 0;
  ActiveSet active;
  /// draws[p][s] is the draw for active.pairs[p] in layer active.pairs[p].layers[s].
  std::vector<std::vector<RateDraw>> draws;
  double w_before = 0.0;
  double w_after = 0.0;
};

/// Executes one synchronous step in place and returns its trace.
StepTrace step(OpinionState& state, const MultilayerTopology& topo, const Matching& u,
               const RatePolicy& policy, std::uint64_t t, std::uint64_t seed);

}  // namespace mlop
