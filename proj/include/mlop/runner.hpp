#pragma once

// Seeded experiment runs: per step, regenerate the topology, sample a
// matching, advance the dynamics and evaluate the diagnostics; optionally
// write trajectories, per-step diagnostics and dumps to an output directory.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlop/diagnostics.hpp"
#include "mlop/dynamics.hpp"
#include "mlop/scenario.hpp"

namespace mlop {

/// Borrowed view handed to RunOptions::observer after every step.
struct StepView {
  std::uint64_t t;  // the step just taken moved the state from t-1 to t
  const OpinionState& before;
  const OpinionState& after;
  const StepTrace& trace;
  const DispersionReport& report;
  double consensus_error;
};

struct RunOptions {
  /// Output directory; created if missing. No files are written when unset.
  std::optional<std::filesystem::path> out_dir;
  bool dump_graphs = false;
  bool dump_matchings = false;
  /// Relative drift of the conserved total that aborts the run.
  double drift_tolerance = 1e-7;
  /// Tolerance factor for the per-step dispersion checks.
  double step_tolerance = 1e-9;
  std::function<void(const StepView&)> observer;
};

struct RunSummary {
  std::uint64_t steps = 0;
  std::vector<double> global_average;
  double initial_consensus_error = 0.0;
  double final_consensus_error = 0.0;
  /// First step from which the error stays below convergence_tol through
  /// the horizon (0 when it is already below at t = 0).
  std::optional<std::uint64_t> steps_to_tol;
  /// (t, W_t) at every recorded step.
  std::vector<std::pair<std::uint64_t, double>> w_trajectory;
  /// Largest relative drift of the conserved total seen during the run.
  double conserved_sum_drift = 0.0;
  /// Steps where W grew beyond the step tolerance.
  std::uint64_t w_increases = 0;
  /// Steps where the measured drop fell below the pathwise bound.
  std::uint64_t bound_violations = 0;

  bool w_nonincreasing() const noexcept { return w_increases == 0; }
};

/// ||S_t - S_0|| divided by the initial mass sum_{k,i} ||x_ki(0)|| (or 1
/// when that mass is zero), where S is the total over all slots.
double relative_sum_drift(std::span<const double> total0, std::span<const double> total,
                          double mass0);

/// sum over slots of ||x_ki||.
double opinion_mass(const OpinionState& state);

/// Runs config.horizon steps. Deterministic for a fixed config. Throws
/// InvariantFailure when the conserved total drifts beyond
/// options.drift_tolerance and IoError when outputs cannot be written.
RunSummary run(const ScenarioConfig& config, const RunOptions& options = {});

/// Writes trajectories.csv (header `t,layer,agent,dim,value`, 1-based
/// indices) rows for one recorded step.
void append_trajectory_rows(std::ostream& out, std::uint64_t t, const OpinionState& state);

/// One hypothesis preflight item.
struct HypothesisCheck {
  std::string name;
  std::string detail;
  bool passed = false;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool thm1_valid = false;  // mixed-sign consensus hypotheses
  bool thm2_valid = false;  // pure-attraction consensus hypotheses

  const HypothesisCheck* find(std::string_view name) const noexcept;
};

/// Checks the consensus hypotheses that are decidable from the config:
/// net attraction of each edge class (Monte Carlo at 5 sigma when the laws
/// are not point masses), chain-edge guarantee of the matcher, layer
/// connectivity, matcher support and pure attraction.
HypothesisReport check_hypotheses(const ScenarioConfig& config,
                                  std::uint64_t samples = 1'000'000);

}  // namespace mlop
