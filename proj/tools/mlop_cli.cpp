// Command-line front end. Links only the C interface of libmlop.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mlop/mlop.h"

namespace {

struct ScenarioHandle {
  mlop_scenario* ptr = nullptr;
  ~ScenarioHandle() { mlop_scenario_free(ptr); }
};

struct SummaryHandle {
  mlop_summary* ptr = nullptr;
  ~SummaryHandle() { mlop_summary_free(ptr); }
};

struct CheckHandle {
  mlop_check* ptr = nullptr;
  ~CheckHandle() { mlop_check_free(ptr); }
};

class CliFailure : public std::runtime_error {
 public:
  explicit CliFailure(mlop_status status)
      : std::runtime_error(std::string(mlop_status_string(status)) + ": " + mlop_last_error()),
        status_(status) {}
  int exit_code() const noexcept { return 10 + static_cast<int>(status_); }

 private:
  mlop_status status_;
};

void ok(mlop_status status) {
  if (status != MLOP_OK) throw CliFailure(status);
}

struct Overrides {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> horizon;
  std::optional<std::uint64_t> agents;
  std::optional<std::uint64_t> layers;
  std::optional<std::uint64_t> record_every;
  std::optional<double> tol;

  void add_to(CLI::App* cmd, bool with_seed) {
    cmd->add_option("--scenario", scenario, "Built-in scenario (thm1, thm2) or INI file")->required();
    if (with_seed) cmd->add_option("--seed", seed, "Random seed (u64)");
    cmd->add_option("--horizon", horizon, "Number of steps T");
    cmd->add_option("--agents", agents, "Override agent count n");
    cmd->add_option("--layers", layers, "Override layer count m");
    cmd->add_option("--record-every", record_every, "Trajectory recording cadence");
    cmd->add_option("--convergence-tol", tol, "Consensus error tolerance");
  }

  void apply(ScenarioHandle& h) const {
    ok(mlop_scenario_load(scenario.c_str(), &h.ptr));
    if (agents) ok(mlop_scenario_set_agents(h.ptr, *agents));
    if (layers) ok(mlop_scenario_set_layers(h.ptr, *layers));
    if (horizon) ok(mlop_scenario_set_horizon(h.ptr, *horizon));
    if (seed) ok(mlop_scenario_set_seed(h.ptr, *seed));
    if (record_every) ok(mlop_scenario_set_record_every(h.ptr, *record_every));
    if (tol) ok(mlop_scenario_set_convergence_tol(h.ptr, *tol));
  }
};

void print_summary(const mlop_summary* s, std::uint64_t seed) {
  const auto steps = mlop_summary_steps_to_tol(s);
  std::printf("seed %llu: initial_error=%.6g final_error=%.6g steps_to_tol=%s max_sum_drift=%.3g "
              "w_increases=%llu bound_violations=%llu\n",
              static_cast<unsigned long long>(seed), mlop_summary_initial_error(s),
              mlop_summary_final_error(s), steps < 0 ? "none" : std::to_string(steps).c_str(),
              mlop_summary_sum_drift(s),
              static_cast<unsigned long long>(mlop_summary_w_increases(s)),
              static_cast<unsigned long long>(mlop_summary_bound_violations(s)));
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw CLI::ValidationError("--seeds", "expected a..b");
  const auto a = std::stoull(text.substr(0, dots));
  const auto b = std::stoull(text.substr(dots + 2));
  if (b < a) throw CLI::ValidationError("--seeds", "range end precedes start");
  return {a, b};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilayer attraction-repulsion opinion dynamics simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mlop_version());

  Overrides run_args;
  std::string run_out;
  bool dump_graphs = false;
  bool dump_matchings = false;
  auto* run_cmd = app.add_subcommand("run", "Run one seeded simulation and write outputs");
  run_args.add_to(run_cmd, true);
  run_cmd->add_option("--out", run_out, "Output directory")->required();
  run_cmd->add_flag("--dump-graphs", dump_graphs, "Write per-step layer graphs to graphs.txt");
  run_cmd->add_flag("--dump-matchings", dump_matchings, "Write per-step matchings to matchings.txt");

  Overrides check_args;
  std::uint64_t samples = 1'000'000;
  auto* check_cmd = app.add_subcommand("check", "Evaluate the consensus hypotheses of a scenario");
  check_args.add_to(check_cmd, true);
  check_cmd->add_option("--samples", samples, "Monte Carlo samples per edge class");

  Overrides sweep_args;
  std::string seeds;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a range of seeds");
  sweep_args.add_to(sweep_cmd, false);
  sweep_cmd->add_option("--seeds", seeds, "Inclusive seed range a..b")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory (one subdirectory per seed)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      ScenarioHandle scenario;
      run_args.apply(scenario);
      mlop_run_options opts{run_out.c_str(), dump_graphs ? 1 : 0, dump_matchings ? 1 : 0};
      SummaryHandle summary;
      ok(mlop_run(scenario.ptr, &opts, &summary.ptr));
      print_summary(summary.ptr, mlop_scenario_seed(scenario.ptr));
    } else if (*check_cmd) {
      ScenarioHandle scenario;
      check_args.apply(scenario);
      CheckHandle check;
      ok(mlop_check_hypotheses(scenario.ptr, samples, &check.ptr));
      for (std::size_t i = 0; i < mlop_check_count(check.ptr); ++i) {
        std::printf("[%s] %-34s %s\n", mlop_check_passed(check.ptr, i) ? "PASS" : "FAIL",
                    mlop_check_name(check.ptr, i), mlop_check_detail(check.ptr, i));
      }
      std::printf("thm1-valid: %s\nthm2-valid: %s\n", mlop_check_thm1_valid(check.ptr) ? "yes" : "no",
                  mlop_check_thm2_valid(check.ptr) ? "yes" : "no");
    } else if (*sweep_cmd) {
      const auto [first, last] = parse_seed_range(seeds);
      std::filesystem::create_directories(sweep_out);
      std::ofstream table(std::filesystem::path(sweep_out) / "sweep.csv");
      table << "seed,initial_error,final_error,steps_to_tol,max_sum_drift,w_increases,bound_violations\n";
      for (std::uint64_t seed = first;; ++seed) {
        ScenarioHandle scenario;
        sweep_args.apply(scenario);
        ok(mlop_scenario_set_seed(scenario.ptr, seed));
        const auto dir = (std::filesystem::path(sweep_out) / ("seed-" + std::to_string(seed))).string();
        mlop_run_options opts{dir.c_str(), 0, 0};
        SummaryHandle summary;
        ok(mlop_run(scenario.ptr, &opts, &summary.ptr));
        print_summary(summary.ptr, seed);
        const auto steps = mlop_summary_steps_to_tol(summary.ptr);
        char row[256];
        std::snprintf(row, sizeof row, "%llu,%.17g,%.17g,%s,%.17g,%llu,%llu\n",
                      static_cast<unsigned long long>(seed), mlop_summary_initial_error(summary.ptr),
                      mlop_summary_final_error(summary.ptr),
                      steps < 0 ? "" : std::to_string(steps).c_str(), mlop_summary_sum_drift(summary.ptr),
                      static_cast<unsigned long long>(mlop_summary_w_increases(summary.ptr)),
                      static_cast<unsigned long long>(mlop_summary_bound_violations(summary.ptr)));
        table << row;
        if (seed == last) break;
      }
      if (!table) {
        std::cerr << "error: cannot write sweep.csv\n";
        return 14;
      }
    }
  } catch (const CliFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
