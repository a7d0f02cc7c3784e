#ifndef GASNET_GASNET_H
#define GASNET_GASNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef GASNET_BUILDING
#    define GASNET_API __declspec(dllexport)
#  else
#    define GASNET_API __declspec(dllimport)
#  endif
#else
#  define GASNET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gasnet_status {
    GASNET_OK = 0,
    GASNET_E_INVALID = 1,    /* config or argument failed validation */
    GASNET_E_IO = 2,         /* file could not be read or written */
    GASNET_E_NUMERICAL = 3,  /* CFL, positivity, root solve, steady state */
    GASNET_E_ARGUMENT = 4,   /* null pointer, unknown id */
    GASNET_E_INTERNAL = 5
} gasnet_status;

/* Message and short machine reason (e.g. "cfl_violation") of the last failed
 * call on this thread. Valid until the next failing call on the thread. */
GASNET_API const char* gasnet_last_error(void);
GASNET_API const char* gasnet_last_reason(void);
GASNET_API const char* gasnet_version(void);

/* Run settings. NaN in a double and NULL in out leave the current value. */
typedef struct gasnet_run_options {
    double dt;
    double dx;
    double t_end;
    double cadence;
    double cfl_safety;
    const char* out;
    int parallel;
} gasnet_run_options;

GASNET_API void gasnet_run_options_init(gasnet_run_options* options);

typedef struct gasnet_run_summary {
    int64_t steps;
    uint64_t samples;
    double initial_mass;            /* kg */
    double max_ledger_discrepancy;  /* kg */
    double wall_seconds;
    char config_sha[65];
} gasnet_run_summary;

/* ---- networks ---------------------------------------------------------- */

typedef struct gasnet_network gasnet_network;

GASNET_API gasnet_status gasnet_validate_config(const char* path, int strict);

GASNET_API gasnet_status gasnet_network_create(const char* path, int strict, gasnet_network** out);
GASNET_API gasnet_status gasnet_network_create_five_node(gasnet_network** out);
GASNET_API void gasnet_network_destroy(gasnet_network* network);

/* Changes the simulation settings; a new dx rebuilds the grid. */
GASNET_API gasnet_status gasnet_network_configure(gasnet_network* network, const gasnet_run_options* options);

/* Solves the steady state at the current time and loads it as the state.
 * json_path may be NULL. */
GASNET_API gasnet_status gasnet_network_steady(gasnet_network* network, const char* json_path);

GASNET_API gasnet_status gasnet_network_step(gasnet_network* network, double dt, int parallel);

/* Runs from the current state to t_end, writing the CSV and its summary. The
 * state is initialised first when nothing has run yet. */
GASNET_API gasnet_status gasnet_network_run(gasnet_network* network, gasnet_run_summary* summary);

GASNET_API gasnet_status gasnet_network_time(const gasnet_network* network, double* t);
GASNET_API gasnet_status gasnet_network_total_mass(const gasnet_network* network, double* kg);
GASNET_API gasnet_status gasnet_network_node_pressure(const gasnet_network* network, const char* node_id,
                                                      double* pa);
GASNET_API gasnet_status gasnet_network_cfl_max_dt(const gasnet_network* network, double safety, double* dt);

/* ---- experiments -------------------------------------------------------- */

typedef struct gasnet_convergence_result {
    double last_two[3]; /* rho, p, phi */
    double endpoint[3];
    int levels;
    int checks_passed;  /* rates inside the reference tolerances */
} gasnet_convergence_result;

/* self_reference != 0 compares the reference run with itself. */
GASNET_API gasnet_status gasnet_convergence(int levels, int self_reference, const char* json_path,
                                            gasnet_convergence_result* result);

typedef struct gasnet_transient_result {
    double dx;
    double dt;
    double max_velocity_left;   /* m/s, absolute */
    double max_velocity_right;
    gasnet_run_summary run;
} gasnet_transient_result;

/* eos is "ideal" or "cnga". Options may be NULL. Outputs go to options->out
 * (CSV) and its summary JSON when set. */
GASNET_API gasnet_status gasnet_fast_transient(const char* eos, const gasnet_run_options* options,
                                               gasnet_transient_result* result);
GASNET_API gasnet_status gasnet_slow_transient(const char* eos, int periods, const gasnet_run_options* options,
                                               gasnet_transient_result* result);
GASNET_API gasnet_status gasnet_temperature_effect(double decay_rate, const gasnet_run_options* options,
                                                   gasnet_transient_result* result);

/* Differences between two temperature runs over the window after the
 * boundary forcing starts: RMS of each right-end variable relative to its
 * mean, and of the left-end flux. */
typedef struct gasnet_temperature_comparison {
    double left_flux_rms;
    double left_flux_relative;
    double right_pressure_relative;
    double right_density_relative;
    double right_flux_relative;
    double right_velocity_relative;
    int left_dominates;  /* left flux exceeds every right-end variable */
} gasnet_temperature_comparison;

GASNET_API gasnet_status gasnet_temperature_compare(double rate_a, double rate_b, const gasnet_run_options* options,
                                                    gasnet_temperature_comparison* result);

GASNET_API gasnet_status gasnet_five_node(const gasnet_run_options* options, gasnet_run_summary* summary);

#ifdef __cplusplus
}
#endif

#endif
