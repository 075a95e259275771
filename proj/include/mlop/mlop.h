/*
 * C interface to the multilayer attraction-repulsion opinion simulator.
 *
 * All objects are opaque handles created by the library and released with
 * the matching *_free function. Every fallible call returns an mlop_status;
 * on failure mlop_last_error() describes the problem (per thread, valid
 * until the next failing call on that thread).
 */
#ifndef MLOP_H
#define MLOP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef MLOP_BUILDING
#    define MLOP_API __declspec(dllexport)
#  else
#    define MLOP_API __declspec(dllimport)
#  endif
#else
#  define MLOP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlop_status {
  MLOP_OK = 0,
  MLOP_ERR_INVALID_ARGUMENT = 1, /* null handle, bad index, bad key */
  MLOP_ERR_PARSE = 2,            /* malformed scenario file or unknown name */
  MLOP_ERR_CONFIG = 3,           /* scenario failed validation */
  MLOP_ERR_IO = 4,               /* output directory or file not writable */
  MLOP_ERR_INVARIANT = 5,        /* runtime invariant (conservation) broken */
  MLOP_ERR_INTERNAL = 6
} mlop_status;

typedef struct mlop_scenario mlop_scenario;
typedef struct mlop_summary mlop_summary;
typedef struct mlop_check mlop_check;

MLOP_API const char* mlop_version(void);
MLOP_API const char* mlop_status_string(mlop_status status);
MLOP_API const char* mlop_last_error(void);

/* ---- scenarios ---------------------------------------------------------- */

/* Built-in name ("thm1", "thm2") or path to an INI scenario file. */
MLOP_API mlop_status mlop_scenario_load(const char* name_or_path, mlop_scenario** out);
/* Scenario from INI text held in memory. */
MLOP_API mlop_status mlop_scenario_parse(const char* ini_text, mlop_scenario** out);
MLOP_API void mlop_scenario_free(mlop_scenario* scenario);

/* Overrides. The scenario is re-validated; on failure it is left unchanged. */
MLOP_API mlop_status mlop_scenario_set_seed(mlop_scenario* s, uint64_t seed);
MLOP_API mlop_status mlop_scenario_set_horizon(mlop_scenario* s, uint64_t horizon);
MLOP_API mlop_status mlop_scenario_set_agents(mlop_scenario* s, uint64_t n);
MLOP_API mlop_status mlop_scenario_set_layers(mlop_scenario* s, uint64_t m);
MLOP_API mlop_status mlop_scenario_set_record_every(mlop_scenario* s, uint64_t k);
MLOP_API mlop_status mlop_scenario_set_convergence_tol(mlop_scenario* s, double tol);

MLOP_API uint64_t mlop_scenario_seed(const mlop_scenario* s);

/* Copies the scenario's INI form into buf (NUL-terminated, truncated to
 * cap). *needed, when non-null, receives the full length without the NUL. */
MLOP_API mlop_status mlop_scenario_to_ini(const mlop_scenario* s, char* buf, size_t cap,
                                          size_t* needed);

/* ---- runs --------------------------------------------------------------- */

typedef struct mlop_run_options {
  const char* out_dir; /* NULL: run in memory only */
  int dump_graphs;
  int dump_matchings;
} mlop_run_options;

/* options may be NULL. */
MLOP_API mlop_status mlop_run(const mlop_scenario* s, const mlop_run_options* options,
                              mlop_summary** out);
MLOP_API void mlop_summary_free(mlop_summary* summary);

MLOP_API double mlop_summary_initial_error(const mlop_summary* s);
MLOP_API double mlop_summary_final_error(const mlop_summary* s);
/* -1 when the error did not settle below the tolerance. */
MLOP_API int64_t mlop_summary_steps_to_tol(const mlop_summary* s);
MLOP_API double mlop_summary_sum_drift(const mlop_summary* s);
MLOP_API uint64_t mlop_summary_w_increases(const mlop_summary* s);
MLOP_API uint64_t mlop_summary_bound_violations(const mlop_summary* s);
MLOP_API size_t mlop_summary_dim(const mlop_summary* s);
MLOP_API double mlop_summary_global_average(const mlop_summary* s, size_t component);
MLOP_API size_t mlop_summary_w_count(const mlop_summary* s);
MLOP_API mlop_status mlop_summary_w_at(const mlop_summary* s, size_t index, uint64_t* t,
                                       double* w);

/* ---- hypothesis preflight ------------------------------------------------ */

MLOP_API mlop_status mlop_check_hypotheses(const mlop_scenario* s, uint64_t samples,
                                           mlop_check** out);
MLOP_API void mlop_check_free(mlop_check* check);
MLOP_API size_t mlop_check_count(const mlop_check* c);
/* Returned strings live as long as the check handle; NULL on bad index. */
MLOP_API const char* mlop_check_name(const mlop_check* c, size_t index);
MLOP_API const char* mlop_check_detail(const mlop_check* c, size_t index);
MLOP_API int mlop_check_passed(const mlop_check* c, size_t index);
MLOP_API int mlop_check_thm1_valid(const mlop_check* c);
MLOP_API int mlop_check_thm2_valid(const mlop_check* c);

#ifdef __cplusplus
}
#endif

#endif /* MLOP_H */
