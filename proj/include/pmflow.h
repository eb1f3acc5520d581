/* pmflow: incompressible two-phase porous-media flow simulator for comparing
 * nonlinear solution strategies (Newton FIM, SFI, FSMSN, MSPIN).
 *
 * C interface of the shared library. All objects are opaque handles owned by
 * the library; every function that can fail returns a pmf_status, and
 * pmf_error_message() describes the most recent failure on this thread.
 */
#ifndef PMFLOW_H
#define PMFLOW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pmf_status {
  PMF_OK = 0,
  PMF_ERR_ARGUMENT = 1,       /* invalid handle, name, key, or value */
  PMF_ERR_CONFIG = 2,         /* inconsistent scenario or run configuration */
  PMF_ERR_NONCONVERGENCE = 3, /* reserved for callers that treat d.n.c. as error */
  PMF_ERR_IO = 4,
  PMF_ERR_INTERNAL = 5
} pmf_status;

typedef enum pmf_solver {
  PMF_SOLVER_NEWTON = 0,
  PMF_SOLVER_SFI_UT = 1,
  PMF_SOLVER_FSMSN_P = 2,
  PMF_SOLVER_FSMSN_UT = 3,
  PMF_SOLVER_MSPIN_P = 4
} pmf_solver;

typedef enum pmf_tolerance {
  PMF_TOLERANCE_FIXED = 0,
  PMF_TOLERANCE_A1 = 1,
  PMF_TOLERANCE_A2 = 2,
  PMF_TOLERANCE_A3 = 3
} pmf_tolerance;

typedef struct pmf_scenario pmf_scenario;
typedef struct pmf_run pmf_run;

/* Message for the most recent failure on the calling thread. */
const char* pmf_error_message(void);

/* ---- scenarios ---- */

int pmf_scenario_count(void);
const char* pmf_scenario_name_at(int index);

/* Builds a named scenario with default parameters. */
pmf_status pmf_scenario_create(const char* name, pmf_scenario** out);

/* Overrides one scenario parameter (e.g. "nx", "dt_days", "variance", "seed")
 * and rebuilds the scenario. Unknown keys are rejected. */
pmf_status pmf_scenario_set(pmf_scenario* sc, const char* key, const char* value);

/* Replaces the permeability ("permeability", m^2) or porosity ("porosity")
 * field from a plain-text file: header "nx nz", then nx*nz row-major values. */
pmf_status pmf_scenario_load_cell_field(pmf_scenario* sc, const char* field,
                                        const char* path);

pmf_status pmf_scenario_dims(const pmf_scenario* sc, int* nx, int* nz);
double pmf_scenario_pore_volume(const pmf_scenario* sc);
double pmf_scenario_default_dt(const pmf_scenario* sc); /* seconds */
double pmf_scenario_t_max(const pmf_scenario* sc);      /* seconds */

void pmf_scenario_destroy(pmf_scenario* sc);

/* ---- runs ---- */

typedef struct pmf_run_options {
  pmf_solver solver;
  pmf_tolerance tolerance;
  double fixed_subproblem_tol; /* used by PMF_TOLERANCE_FIXED */
  double outer_tol;
  double dt_seconds; /* <= 0: scenario default */
  int max_outer;
  int max_inner;
  int max_retries; /* time-step halvings before the run aborts */
  const double* snapshot_times; /* seconds, may be NULL */
  int snapshot_count;
} pmf_run_options;

/* Fills an options struct with the defaults (Newton, fixed 1e-6 subproblem
 * tolerance, outer tolerance 1e-8, scenario dt, 4 retries). */
void pmf_run_options_init(pmf_run_options* opt);

/* Runs the schedule. A run that aborts on non-convergence still returns
 * PMF_OK with pmf_run_converged() == 0, so sweeps can report "d.n.c.". */
pmf_status pmf_run_simulation(const pmf_scenario* sc, const pmf_run_options* opt,
                              pmf_run** out);

int pmf_run_converged(const pmf_run* run); /* 1 when the schedule completed */
int pmf_run_step_count(const pmf_run* run);
long long pmf_run_outer_iterations(const pmf_run* run);
long long pmf_run_pressure_iterations(const pmf_run* run);
long long pmf_run_transport_iterations(const pmf_run* run);
double pmf_run_iterations_per_step(const pmf_run* run);
double pmf_run_max_cfl(const pmf_run* run);
int pmf_run_restart_count(const pmf_run* run);
double pmf_run_pvi(const pmf_run* run);
double pmf_run_volume_balance_error(const pmf_run* run);

/* Residual-norm history of one step (index 0 is the initial norm). Returns
 * the length, or copies up to capacity entries when out is non-NULL. */
int pmf_run_history(const pmf_run* run, int step, double* out, int capacity);

/* Saved field snapshots. */
int pmf_run_snapshot_count(const pmf_run* run);
pmf_status pmf_run_snapshot_time(const pmf_run* run, int index, double* seconds);
pmf_status pmf_run_snapshot_fields(const pmf_run* run, int index, double* pressure,
                                   double* saturation, int capacity);

void pmf_run_destroy(pmf_run* run);

/* Scales dt until the run's maximum CFL number is within rel_tol of target. */
pmf_status pmf_find_dt_for_max_cfl(const pmf_scenario* sc,
                                   const pmf_run_options* opt, double target_cfl,
                                   double rel_tol, double* dt_seconds);

#ifdef __cplusplus
}
#endif

#endif /* PMFLOW_H */
