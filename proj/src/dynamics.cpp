#include "mlop/dynamics.hpp"

#include <cmath>
#include <string>

#include "mlop/diagnostics.hpp"
#include "mlop/errors.hpp"

namespace mlop {

OpinionState::OpinionState(std::size_t n, std::size_t m, std::size_t d)
    : n_(n), m_(m), d_(d), data_(n * m * d, 0.0) {}

OpinionState::OpinionState(std::size_t n, std::size_t m, std::size_t d, std::vector<double> values)
    : n_(n), m_(m), d_(d), data_(std::move(values)) {
  if (data_.size() != n * m * d)
    throw ContractViolation("opinion state needs m*n*d values, got " + std::to_string(data_.size()));
}

std::vector<double> OpinionState::total() const {
  std::vector<double> sum(d_, 0.0);
  for (std::size_t s = 0; s < slots(); ++s)
    for (std::size_t c = 0; c < d_; ++c) sum[c] += data_[s * d_ + c];
  return sum;
}

bool OpinionState::all_finite() const noexcept {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void MuLaw::validate(const char* field) const {
  const std::string f(field);
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError(f + ": non-finite bound");
  if (kind == Kind::point) {
    if (!(a > 0.0 && a <= 0.5)) throw ConfigError(f + ": mu must lie in (0, 1/2]");
  } else {
    if (!(a >= 0.0)) throw ConfigError(f + ": mu lower bound must be >= 0");
    if (!(b <= 0.5)) throw ConfigError(f + ": mu upper bound must be <= 1/2");
    if (!(a < b)) throw ConfigError(f + ": mu lower bound must be below upper bound");
  }
}

double MuLaw::sample(Rng& rng) const {
  if (kind == Kind::point) return a;
  double v;
  do {
    v = rng.uniform(a, b);
  } while (v <= 0.0);
  return v;
}

void ThetaLaw::validate(const MuLaw& mu, const char* field) const {
  const std::string f(field);
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError(f + ": non-finite bound");
  switch (kind) {
    case Kind::point:
      if (!(a >= 0.0 && a <= 1.0)) throw ConfigError(f + ": theta must lie in [0, 1]");
      break;
    case Kind::uniform:
      if (!(a >= 0.0 && b <= 1.0 && a <= b))
        throw ConfigError(f + ": theta bounds must satisfy 0 <= lo <= hi <= 1");
      break;
    case Kind::biased:
      if (!((a + mu.lower()) / 2.0 >= 0.0 && (a + mu.upper()) / 2.0 <= 1.0))
        throw ConfigError(f + ": (offset + mu) / 2 must stay within [0, 1]");
      break;
  }
}

double ThetaLaw::sample(double mu, Rng& rng) const {
  switch (kind) {
    case Kind::point: return a;
    case Kind::uniform: return rng.uniform(a, b);
    case Kind::biased: return rng.uniform((a + mu) / 2.0, 1.0);
  }
  return a;
}

void RatePolicy::validate() const {
  chain.mu.validate("rates.chain.mu");
  chain.theta.validate(chain.mu, "rates.chain.theta");
  other.mu.validate("rates.other.mu");
  other.theta.validate(other.mu, "rates.other.theta");
}

RateDraw draw_rate(const RatePolicy& policy, LayerIndex layer, const Edge& edge,
                   std::uint64_t t, std::uint64_t seed) {
  Rng rng = Rng::keyed(seed, Stream::rate, {t, layer, edge.u, edge.v});
  const EdgeClassLaw& law = policy.law_for(edge);
  RateDraw d;
  d.mu = law.mu.sample(rng);
  d.theta = law.theta.sample(d.mu, rng);
  d.r = rng.bernoulli(d.theta) ? d.mu : -d.mu;
  return d;
}

void update_pair(OpinionState& state, const ActivePair& pair, std::span<const RateDraw> draws) {
  if (pair.layers.empty()) throw ContractViolation("active pair with empty layer set");
  if (draws.size() != pair.layers.size())
    throw ContractViolation("one rate draw per shared layer required");
  const std::size_t d = state.dim();
  const auto i = pair.edge.u;
  const auto j = pair.edge.v;
  const double inv = 1.0 / static_cast<double>(pair.layers.size());

  std::vector<double> next_i(d, 0.0);
  std::vector<double> next_j(d, 0.0);
  for (std::size_t s = 0; s < pair.layers.size(); ++s) {
    const auto xi = state.at(pair.layers[s], i);
    const auto xj = state.at(pair.layers[s], j);
    const double r = draws[s].r;
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = xj[c] - xi[c];
      next_i[c] += xi[c] + r * diff;
      next_j[c] += xj[c] - r * diff;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    next_i[c] *= inv;
    next_j[c] *= inv;
  }
  for (LayerIndex k : pair.layers) {
    auto xi = state.at(k, i);
    auto xj = state.at(k, j);
    std::copy(next_i.begin(), next_i.end(), xi.begin());
    std::copy(next_j.begin(), next_j.end(), xj.begin());
  }
}

StepTrace step(OpinionState& state, const MultilayerTopology& topo, const Matching& u,
               const RatePolicy& policy, std::uint64_t t, std::uint64_t seed) {
  if (topo.vertex_count() != state.agents() || topo.layer_count() != state.layers())
    throw ContractViolation("state and topology disagree on n or m");
  StepTrace trace;
  trace.t = t;
  trace.w_before = lyapunov_w(state);
  trace.active = derive_active_set(u, topo);
  trace.draws.reserve(trace.active.size());
  for (const ActivePair& pair : trace.active.pairs) {
    std::vector<RateDraw> draws;
    draws.reserve(pair.layers.size());
    for (LayerIndex k : pair.layers) draws.push_back(draw_rate(policy, k, pair.edge, t, seed));
    update_pair(state, pair, draws);
    trace.draws.push_back(std::move(draws));
  }
  trace.w_after = lyapunov_w(state);
  return trace;
}

}  // namespace mlop
