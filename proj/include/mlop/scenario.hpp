#pragma once

// Experiment descriptions: sizes, horizon, graph process, matching law,
// rate laws, initial-opinion law and seed. Scenarios come from the built-in
// table ("thm1", "thm2") or from INI files; see README for the grammar.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlop/dynamics.hpp"
#include "mlop/graph_layers.hpp"
#include "mlop/matching.hpp"

namespace mlop {

struct GraphSpec {
  enum class Mode {
    er_chain,  // fresh ER layers every step, chain forced
    er,        // fresh ER layers every step, no forced chain
    fixed,     // one topology for the whole run
  };
  Mode mode = Mode::er_chain;
  double p = 0.05;
  /// Only for Mode::fixed: whether the one-off ER draw forces the chain.
  bool chain = true;
  /// Only for Mode::fixed: explicit per-layer edges (0-based). When empty
  /// the fixed topology is an ER draw at t = 0.
  std::vector<std::vector<Edge>> layers;
};

struct InitSpec {
  enum class Law { uniform01, cauchy, explicit_values };
  Law law = Law::uniform01;
  double loc = 0.0;
  double scale = 1.0;
  /// m*n*d values ordered (layer, agent, dim).
  std::vector<double> values;
};

struct ScenarioConfig {
  std::string name = "custom";
  std::size_t n = 100;
  std::size_t m = 5;
  std::size_t d = 1;
  std::uint64_t horizon = 1000;
  std::uint64_t seed = 1;
  /// 0 selects the default cadence: 1 for n <= 50, otherwise 10.
  std::uint64_t record_every = 0;
  double convergence_tol = 1e-6;
  GraphSpec graph;
  MatcherLaw matcher = MatcherLaw::chain_forced;
  RatePolicy rates;
  InitSpec init;

  std::uint64_t effective_record_every() const noexcept {
    if (record_every != 0) return record_every;
    return n <= 50 ? 1 : 10;
  }

  /// Throws ConfigError naming the first bad field.
  void validate() const;
};

std::string_view to_string(GraphSpec::Mode mode) noexcept;
std::string_view to_string(InitSpec::Law law) noexcept;

/// Names accepted by builtin_scenario.
std::vector<std::string> builtin_scenario_names();

/// Mixed attraction/repulsion with a chain edge in every matching.
ScenarioConfig thm1_scenario();
/// Pure attraction, uniform matchings, Cauchy initial opinions.
ScenarioConfig thm2_scenario();

std::optional<ScenarioConfig> builtin_scenario(std::string_view name);

/// Parses an INI document. A top-level `extends = <builtin>` starts from
/// that scenario; otherwise from ScenarioConfig defaults. The result is
/// validated.
ScenarioConfig parse_scenario(std::string_view text);

/// Built-in name, or path to an INI file.
ScenarioConfig load_scenario(std::string_view name_or_path);

/// INI text that parse_scenario maps back to an equivalent config.
std::string to_ini(const ScenarioConfig& config);

/// Initial opinions drawn from config.init with a stream keyed by the seed.
OpinionState initial_state(const ScenarioConfig& config);

/// Topology for step t (layers keyed by (seed, t, layer); t is ignored for
/// fixed graphs).
MultilayerTopology topology_at(const ScenarioConfig& config, std::uint64_t t);

}  // namespace mlop
