#include "mlop/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "mlop/errors.hpp"

namespace mlop {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double diff = a[c] - b[c];
    s += diff * diff;
  }
  return s;
}

}  // namespace

double lyapunov_w(const OpinionState& state) {
  double w = 0.0;
  for (double v : state.values()) w += v * v;
  return w;
}

double drop_bound(const StepTrace& trace, const OpinionState& state_before) {
  if (trace.draws.size() != trace.active.size())
    throw ContractViolation("trace draws do not match active set");
  double bound = 0.0;
  for (std::size_t p = 0; p < trace.active.size(); ++p) {
    const ActivePair& pair = trace.active.pairs[p];
    for (std::size_t s = 0; s < pair.layers.size(); ++s) {
      const double r = trace.draws[p][s].r;
      if (r == 0.0) throw ContractViolation("zero interaction rate in trace");
      const double gap = squared_distance(state_before.at(pair.layers[s], pair.edge.v),
                                          state_before.at(pair.layers[s], pair.edge.u));
      bound += r * r * (1.0 / r - 1.0) * gap;
    }
  }
  return 2.0 * bound;
}

bool DispersionReport::holds(double tol) const noexcept {
  return drop >= bound - tol * std::max(1.0, std::abs(w));
}

DispersionReport dispersion_report(const StepTrace& trace, const OpinionState& state_before) {
  return {trace.w_before, trace.w_before - trace.w_after, drop_bound(trace, state_before)};
}

AttractionEstimate net_attraction(const MuLaw& mu, const ThetaLaw& theta,
                                  std::uint64_t n_samples, Rng& rng) {
  if (mu.kind == MuLaw::Kind::point && theta.kind == ThetaLaw::Kind::point) {
    return {mu.a * (2.0 * theta.a - 1.0 - mu.a), 0.0, 0};
  }
  if (n_samples < 2) throw ContractViolation("net_attraction needs at least 2 samples");
  // Welford running mean/variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t s = 1; s <= n_samples; ++s) {
    const double u = mu.sample(rng);
    const double th = theta.sample(u, rng);
    const double x = u * (2.0 * th - 1.0 - u);
    const double delta = x - mean;
    mean += delta / static_cast<double>(s);
    m2 += delta * (x - mean);
  }
  const double n = static_cast<double>(n_samples);
  const double var = m2 / (n - 1.0);
  return {mean, std::sqrt(var / n), n_samples};
}

bool component_epsilon_trivial(const LayerGraph& g, const OpinionState& state,
                               LayerIndex layer, double eps) {
  if (!(eps > 0.0)) throw ContractViolation("eps must be positive");
  if (g.vertex_count() != state.agents() || layer >= state.layers())
    throw ContractViolation("graph/layer inconsistent with state");
  const double eps2 = eps * eps;
  for (const auto& part : connected_components(g)) {
    for (std::size_t a = 0; a < part.size(); ++a)
      for (std::size_t b = a + 1; b < part.size(); ++b)
        if (squared_distance(state.at(layer, part[a]), state.at(layer, part[b])) > eps2)
          return false;
  }
  return true;
}

std::vector<double> global_average(const OpinionState& state) {
  auto avg = state.total();
  const double inv = 1.0 / static_cast<double>(state.slots());
  for (double& v : avg) v *= inv;
  return avg;
}

double consensus_error(const OpinionState& state, std::span<const double> target) {
  if (target.size() != state.dim()) throw ContractViolation("target dimension mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < state.layers(); ++k)
    for (std::size_t i = 0; i < state.agents(); ++i)
      worst = std::max(worst, squared_distance(state.at(k, i), target));
  return std::sqrt(worst);
}

double max_pairwise_distance(const OpinionState& state) {
  const std::size_t d = state.dim();
  const auto values = state.values();
  const std::size_t slots = state.slots();
  if (d == 1) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return slots == 0 ? 0.0 : *hi - *lo;
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < slots; ++a)
    for (std::size_t b = a + 1; b < slots; ++b)
      worst = std::max(worst, squared_distance(values.subspan(a * d, d), values.subspan(b * d, d)));
  return std::sqrt(worst);
}

}  // namespace mlop
