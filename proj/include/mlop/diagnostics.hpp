#pragma once

// Analytic quantities used to monitor a run: the Lyapunov dispersion W, the
// pathwise lower bound on its one-step drop, the expected net attraction of
// a rate law, per-component epsilon-triviality, and distance to consensus.

#include <cstdint>
#include <span>
#include <vector>

#include "mlop/dynamics.hpp"
#include "mlop/graph_layers.hpp"
#include "mlop/rng.hpp"

namespace mlop {

/// Sum of squared norms over every (layer, agent) slot.
double lyapunov_w(const OpinionState& state);

/// 2 * sum over active pairs (p,q) and their layers i of
/// r^2 (1/r - 1) ||x_iq - x_ip||^2, with the realized draws of `trace`
/// evaluated at the pre-step state. W_t - W_{t+1} is never below this.
double drop_bound(const StepTrace& trace, const OpinionState& state_before);

struct DispersionReport {
  double w = 0.0;      // W before the step
  double drop = 0.0;   // W_t - W_{t+1}
  double bound = 0.0;  // drop_bound for the same step

  /// drop >= bound up to tol * max(1, |W_t|).
  bool holds(double tol = 1e-9) const noexcept;
};

DispersionReport dispersion_report(const StepTrace& trace, const OpinionState& state_before);

struct AttractionEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;

  /// value - sigmas * std_error > 0.
  bool positive_at(double sigmas) const noexcept { return value - sigmas * std_error > 0.0; }
};

/// E[mu (2 theta - 1 - mu)]. Exact when both laws are point masses,
/// otherwise a Monte Carlo mean over n_samples draws with its standard error.
AttractionEstimate net_attraction(const MuLaw& mu, const ThetaLaw& theta,
                                  std::uint64_t n_samples, Rng& rng);

/// True iff within every connected component of g, the layer-`layer`
/// opinions of any two members are within eps (Euclidean) of each other.
bool component_epsilon_trivial(const LayerGraph& g, const OpinionState& state,
                               LayerIndex layer, double eps);

/// (1 / (n m)) * sum of all slots.
std::vector<double> global_average(const OpinionState& state);

/// max over slots of ||x_ki - target||.
double consensus_error(const OpinionState& state, std::span<const double> target);

/// max over pairs of slots of ||x_a - x_b||, across all layers and agents.
double max_pairwise_distance(const OpinionState& state);

}  // namespace mlop
