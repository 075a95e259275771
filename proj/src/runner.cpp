#include "mlop/runner.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mlop/errors.hpp"

namespace mlop {

namespace {

// Shortest round-trip representation; identical bytes for identical doubles.
std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

class OutputFiles {
 public:
  OutputFiles(const std::filesystem::path& dir, const RunOptions& options) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    open(trajectories, dir / "trajectories.csv");
    open(summary, dir / "summary.csv");
    if (options.dump_graphs) open(graphs, dir / "graphs.txt");
    if (options.dump_matchings) open(matchings, dir / "matchings.txt");
    trajectories << "t,layer,agent,dim,value\n";
    summary << "t,w,drop,bound,consensus_error,sum_drift\n";
  }

  void check() const {
    for (const std::ofstream* f : {&trajectories, &summary, &graphs, &matchings})
      if (f->is_open() && !f->good()) throw IoError("write failed in output directory");
  }

  std::ofstream trajectories;
  std::ofstream summary;
  std::ofstream graphs;
  std::ofstream matchings;

 private:
  static void open(std::ofstream& f, const std::filesystem::path& p) {
    f.open(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + p.string() + " for writing");
  }
};

void write_run_json(const std::filesystem::path& dir, const ScenarioConfig& config,
                    const RunSummary& s) {
  nlohmann::ordered_json j;
  j["scenario"] = config.name;
  j["seed"] = config.seed;
  j["n"] = config.n;
  j["m"] = config.m;
  j["d"] = config.d;
  j["horizon"] = config.horizon;
  j["record_every"] = config.effective_record_every();
  j["convergence_tol"] = config.convergence_tol;
  j["global_average"] = s.global_average;
  j["initial_consensus_error"] = s.initial_consensus_error;
  j["final_consensus_error"] = s.final_consensus_error;
  j["steps_to_tol"] = s.steps_to_tol ? nlohmann::ordered_json(*s.steps_to_tol) : nullptr;
  j["max_sum_drift"] = s.conserved_sum_drift;
  j["w_increases"] = s.w_increases;
  j["bound_violations"] = s.bound_violations;
  std::ofstream out(dir / "run.json", std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  std::ofstream ini(dir / "scenario.ini", std::ios::binary | std::ios::trunc);
  ini << to_ini(config);
  if (!out || !ini) throw IoError("cannot write run.json/scenario.ini in " + dir.string());
}

}  // namespace

double relative_sum_drift(std::span<const double> total0, std::span<const double> total,
                          double mass0) {
  double s = 0.0;
  for (std::size_t c = 0; c < total0.size(); ++c) {
    const double diff = total[c] - total0[c];
    s += diff * diff;
  }
  return std::sqrt(s) / (mass0 > 0.0 ? mass0 : 1.0);
}

double opinion_mass(const OpinionState& state) {
  double mass = 0.0;
  for (std::size_t k = 0; k < state.layers(); ++k)
    for (std::size_t i = 0; i < state.agents(); ++i) mass += norm(state.at(k, i));
  return mass;
}

void append_trajectory_rows(std::ostream& out, std::uint64_t t, const OpinionState& state) {
  for (std::size_t k = 0; k < state.layers(); ++k)
    for (std::size_t i = 0; i < state.agents(); ++i) {
      const auto x = state.at(k, i);
      for (std::size_t c = 0; c < x.size(); ++c)
        out << t << ',' << (k + 1) << ',' << (i + 1) << ',' << (c + 1) << ',' << fmt_real(x[c])
            << '\n';
    }
}

RunSummary run(const ScenarioConfig& config, const RunOptions& options) {
  config.validate();
  const std::uint64_t record_every = config.effective_record_every();

  std::optional<OutputFiles> files;
  if (options.out_dir) files.emplace(*options.out_dir, options);

  OpinionState state = initial_state(config);
  const auto total0 = state.total();
  const double mass0 = opinion_mass(state);

  RunSummary summary;
  summary.global_average = global_average(state);
  summary.initial_consensus_error = consensus_error(state, summary.global_average);
  summary.w_trajectory.emplace_back(0, lyapunov_w(state));

  std::uint64_t last_above = 0;
  bool ever_above = summary.initial_consensus_error >= config.convergence_tol;

  if (files) {
    append_trajectory_rows(files->trajectories, 0, state);
    files->summary << "0," << fmt_real(summary.w_trajectory.front().second) << ",0,0,"
                   << fmt_real(summary.initial_consensus_error) << ",0\n";
  }

  const bool fixed_graph = config.graph.mode == GraphSpec::Mode::fixed;
  std::optional<MultilayerTopology> topo;
  if (fixed_graph) topo.emplace(topology_at(config, 0));

  double error = summary.initial_consensus_error;
  for (std::uint64_t t = 0; t < config.horizon; ++t) {
    if (!fixed_graph) topo.emplace(topology_at(config, t));
    Rng match_rng = Rng::keyed(config.seed, Stream::matching, {t});
    const Matching matching = sample_matching(config.matcher, config.n, match_rng);

    const OpinionState before = state;
    const StepTrace trace = step(state, *topo, matching, config.rates, t, config.seed);
    const DispersionReport report = dispersion_report(trace, before);
    const std::uint64_t now = t + 1;

    const double scale = options.step_tolerance * std::max(1.0, std::abs(report.w));
    if (report.drop < -scale) ++summary.w_increases;
    if (!report.holds(options.step_tolerance)) ++summary.bound_violations;

    error = consensus_error(state, summary.global_average);
    if (error >= config.convergence_tol) {
      ever_above = true;
      last_above = now;
    }
    const double drift = relative_sum_drift(total0, state.total(), mass0);
    summary.conserved_sum_drift = std::max(summary.conserved_sum_drift, drift);
    if (!(drift <= options.drift_tolerance)) {
      throw InvariantFailure("conserved total drifted by " + fmt_real(drift) + " (relative) at t=" +
                             std::to_string(now));
    }

    const bool recorded = now % record_every == 0 || now == config.horizon;
    if (recorded) summary.w_trajectory.emplace_back(now, trace.w_after);

    if (files) {
      if (recorded) append_trajectory_rows(files->trajectories, now, state);
      files->summary << now << ',' << fmt_real(trace.w_after) << ',' << fmt_real(report.drop) << ','
                     << fmt_real(report.bound) << ',' << fmt_real(error) << ',' << fmt_real(drift)
                     << '\n';
      if (files->graphs.is_open()) files->graphs << "t=" << t << '\n' << format_topology(*topo);
      if (files->matchings.is_open())
        files->matchings << format_matching_line(t, matching, trace.active) << '\n';
      files->check();
    }

    if (options.observer) options.observer({now, before, state, trace, report, error});
  }

  summary.steps = config.horizon;
  summary.final_consensus_error = error;
  if (!ever_above) summary.steps_to_tol = 0;
  else if (last_above < config.horizon) summary.steps_to_tol = last_above + 1;

  if (files) {
    files->trajectories.flush();
    files->summary.flush();
    files->check();
    write_run_json(*options.out_dir, config, summary);
  }
  return summary;
}

const HypothesisCheck* HypothesisReport::find(std::string_view name) const noexcept {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

HypothesisReport check_hypotheses(const ScenarioConfig& config, std::uint64_t samples) {
  config.validate();
  constexpr double sigmas = 5.0;
  HypothesisReport report;
  auto add = [&](std::string name, std::string detail, bool passed) {
    report.checks.push_back({std::move(name), std::move(detail), passed});
    return passed;
  };
  auto describe = [](const AttractionEstimate& a) {
    std::ostringstream out;
    out << "A = " << fmt_real(a.value);
    if (a.n_samples > 0) out << " +- " << fmt_real(a.std_error) << " (" << a.n_samples << " samples)";
    else out << " (exact)";
    return out.str();
  };

  Rng chain_rng = Rng::keyed(config.seed, Stream::estimate, {0});
  Rng other_rng = Rng::keyed(config.seed, Stream::estimate, {1});
  const auto chain_a = net_attraction(config.rates.chain.mu, config.rates.chain.theta, samples, chain_rng);
  const auto other_a = net_attraction(config.rates.other.mu, config.rates.other.theta, samples, other_rng);

  const bool chain_positive = add("chain_net_attraction_positive", describe(chain_a),
                                  chain_a.positive_at(sigmas));
  const bool other_nonneg = add("other_net_attraction_nonnegative", describe(other_a),
                                other_a.value + sigmas * other_a.std_error >= 0.0);

  const bool forces_chain = add("matcher_forces_chain_edge", std::string(to_string(config.matcher)),
                                config.matcher == MatcherLaw::chain_forced);

  bool layers_connected = false;
  std::string graph_detail(to_string(config.graph.mode));
  if (config.graph.mode == GraphSpec::Mode::er_chain) {
    layers_connected = true;
  } else if (config.graph.mode == GraphSpec::Mode::fixed) {
    const auto topo = topology_at(config, 0);
    layers_connected = true;
    for (const auto& g : topo.layers()) layers_connected = layers_connected && is_connected(g);
  } else {
    graph_detail += " (connectivity not guaranteed)";
  }
  add("layers_connected", graph_detail, layers_connected);

  // Both samplers put positive mass on every edge of K_n, so any spanning
  // forest edge is admissible.
  const bool full_support = config.matcher != MatcherLaw::empty;
  add("matcher_support_covers_forests", std::string(to_string(config.matcher)), full_support);

  const bool pure = config.rates.chain.theta.kind == ThetaLaw::Kind::point &&
                    config.rates.chain.theta.a == 1.0 &&
                    config.rates.other.theta.kind == ThetaLaw::Kind::point &&
                    config.rates.other.theta.a == 1.0;
  add("pure_attraction", pure ? "theta = 1 for every class" : "theta < 1 possible", pure);

  const double mu_floor = config.rates.chain.mu.lower();
  const bool mu_positive = add("chain_mu_floor_positive", "inf mu = " + fmt_real(mu_floor), mu_floor > 0.0);

  report.thm1_valid = chain_positive && other_nonneg && forces_chain && layers_connected && full_support;
  // Fresh ER layers with p > 0 are all connected with positive probability
  // each step, hence infinitely often.
  const bool connected_infinitely_often =
      layers_connected || (config.graph.mode == GraphSpec::Mode::er && config.graph.p > 0.0);
  report.thm2_valid = pure && mu_positive && full_support && connected_infinitely_often;
  return report;
}

}  // namespace mlop
