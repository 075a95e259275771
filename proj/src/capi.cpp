#include "mlop/mlop.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <string>

#include "mlop/errors.hpp"
#include "mlop/runner.hpp"
#include "mlop/scenario.hpp"

struct mlop_scenario {
  mlop::ScenarioConfig config;
};

struct mlop_summary {
  mlop::RunSummary summary;
};

struct mlop_check {
  mlop::HypothesisReport report;
};

namespace {

thread_local std::string last_error;

mlop_status fail(mlop_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
mlop_status guarded(Body&& body) noexcept {
  try {
    body();
    return MLOP_OK;
  } catch (const mlop::ParseError& e) {
    return fail(MLOP_ERR_PARSE, e.what());
  } catch (const mlop::ConfigError& e) {
    return fail(MLOP_ERR_CONFIG, e.what());
  } catch (const mlop::IoError& e) {
    return fail(MLOP_ERR_IO, e.what());
  } catch (const mlop::InvariantFailure& e) {
    return fail(MLOP_ERR_INVARIANT, e.what());
  } catch (const mlop::ContractViolation& e) {
    return fail(MLOP_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(MLOP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MLOP_ERR_INTERNAL, "unknown error");
  }
}

template <class Mutate>
mlop_status update(mlop_scenario* s, Mutate&& mutate) noexcept {
  if (!s) return fail(MLOP_ERR_INVALID_ARGUMENT, "null scenario");
  return guarded([&] {
    mlop::ScenarioConfig next = s->config;
    mutate(next);
    next.validate();
    s->config = std::move(next);
  });
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* mlop_version(void) { return "1.0.0"; }

const char* mlop_status_string(mlop_status status) {
  switch (status) {
    case MLOP_OK: return "ok";
    case MLOP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MLOP_ERR_PARSE: return "parse error";
    case MLOP_ERR_CONFIG: return "configuration error";
    case MLOP_ERR_IO: return "I/O error";
    case MLOP_ERR_INVARIANT: return "invariant failure";
    case MLOP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mlop_last_error(void) { return last_error.c_str(); }

mlop_status mlop_scenario_load(const char* name_or_path, mlop_scenario** out) {
  if (!name_or_path || !out) return fail(MLOP_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new mlop_scenario{mlop::load_scenario(name_or_path)}; });
}

mlop_status mlop_scenario_parse(const char* ini_text, mlop_scenario** out) {
  if (!ini_text || !out) return fail(MLOP_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new mlop_scenario{mlop::parse_scenario(ini_text)}; });
}

void mlop_scenario_free(mlop_scenario* scenario) { delete scenario; }

mlop_status mlop_scenario_set_seed(mlop_scenario* s, uint64_t seed) {
  return update(s, [&](mlop::ScenarioConfig& c) { c.seed = seed; });
}

mlop_status mlop_scenario_set_horizon(mlop_scenario* s, uint64_t horizon) {
  return update(s, [&](mlop::ScenarioConfig& c) { c.horizon = horizon; });
}

mlop_status mlop_scenario_set_agents(mlop_scenario* s, uint64_t n) {
  return update(s, [&](mlop::ScenarioConfig& c) { c.n = n; });
}

mlop_status mlop_scenario_set_layers(mlop_scenario* s, uint64_t m) {
  return update(s, [&](mlop::ScenarioConfig& c) { c.m = m; });
}

mlop_status mlop_scenario_set_record_every(mlop_scenario* s, uint64_t k) {
  return update(s, [&](mlop::ScenarioConfig& c) { c.record_every = k; });
}

mlop_status mlop_scenario_set_convergence_tol(mlop_scenario* s, double tol) {
  return update(s, [&](mlop::ScenarioConfig& c) { c.convergence_tol = tol; });
}

uint64_t mlop_scenario_seed(const mlop_scenario* s) { return s ? s->config.seed : 0; }

mlop_status mlop_scenario_to_ini(const mlop_scenario* s, char* buf, size_t cap, size_t* needed) {
  if (!s) return fail(MLOP_ERR_INVALID_ARGUMENT, "null scenario");
  return guarded([&] {
    const std::string text = mlop::to_ini(s->config);
    if (needed) *needed = text.size();
    if (buf && cap > 0) {
      const size_t n = std::min(cap - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

mlop_status mlop_run(const mlop_scenario* s, const mlop_run_options* options, mlop_summary** out) {
  if (!s || !out) return fail(MLOP_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    mlop::RunOptions opts;
    if (options) {
      if (options->out_dir) opts.out_dir = std::filesystem::path(options->out_dir);
      opts.dump_graphs = options->dump_graphs != 0;
      opts.dump_matchings = options->dump_matchings != 0;
    }
    *out = new mlop_summary{mlop::run(s->config, opts)};
  });
}

void mlop_summary_free(mlop_summary* summary) { delete summary; }

double mlop_summary_initial_error(const mlop_summary* s) {
  return s ? s->summary.initial_consensus_error : kNaN;
}

double mlop_summary_final_error(const mlop_summary* s) {
  return s ? s->summary.final_consensus_error : kNaN;
}

int64_t mlop_summary_steps_to_tol(const mlop_summary* s) {
  if (!s || !s->summary.steps_to_tol) return -1;
  return static_cast<int64_t>(*s->summary.steps_to_tol);
}

double mlop_summary_sum_drift(const mlop_summary* s) {
  return s ? s->summary.conserved_sum_drift : kNaN;
}

uint64_t mlop_summary_w_increases(const mlop_summary* s) { return s ? s->summary.w_increases : 0; }

uint64_t mlop_summary_bound_violations(const mlop_summary* s) {
  return s ? s->summary.bound_violations : 0;
}

size_t mlop_summary_dim(const mlop_summary* s) { return s ? s->summary.global_average.size() : 0; }

double mlop_summary_global_average(const mlop_summary* s, size_t component) {
  if (!s || component >= s->summary.global_average.size()) return kNaN;
  return s->summary.global_average[component];
}

size_t mlop_summary_w_count(const mlop_summary* s) { return s ? s->summary.w_trajectory.size() : 0; }

mlop_status mlop_summary_w_at(const mlop_summary* s, size_t index, uint64_t* t, double* w) {
  if (!s || index >= s->summary.w_trajectory.size())
    return fail(MLOP_ERR_INVALID_ARGUMENT, "summary index out of range");
  if (t) *t = s->summary.w_trajectory[index].first;
  if (w) *w = s->summary.w_trajectory[index].second;
  return MLOP_OK;
}

mlop_status mlop_check_hypotheses(const mlop_scenario* s, uint64_t samples, mlop_check** out) {
  if (!s || !out) return fail(MLOP_ERR_INVALID_ARGUMENT, "null argument");
  if (samples < 2) return fail(MLOP_ERR_INVALID_ARGUMENT, "need at least 2 Monte Carlo samples");
  *out = nullptr;
  return guarded([&] { *out = new mlop_check{mlop::check_hypotheses(s->config, samples)}; });
}

void mlop_check_free(mlop_check* check) { delete check; }

size_t mlop_check_count(const mlop_check* c) { return c ? c->report.checks.size() : 0; }

const char* mlop_check_name(const mlop_check* c, size_t index) {
  if (!c || index >= c->report.checks.size()) return nullptr;
  return c->report.checks[index].name.c_str();
}

const char* mlop_check_detail(const mlop_check* c, size_t index) {
  if (!c || index >= c->report.checks.size()) return nullptr;
  return c->report.checks[index].detail.c_str();
}

int mlop_check_passed(const mlop_check* c, size_t index) {
  if (!c || index >= c->report.checks.size()) return 0;
  return c->report.checks[index].passed ? 1 : 0;
}

int mlop_check_thm1_valid(const mlop_check* c) { return c && c->report.thm1_valid ? 1 : 0; }

int mlop_check_thm2_valid(const mlop_check* c) { return c && c->report.thm2_valid ? 1 : 0; }

}  // extern "C"
