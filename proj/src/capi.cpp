#include "pmflow.h"

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <string>

#include "core/scenarios.hpp"
#include "core/timeloop.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
pmf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const pmflow::ConfigError& e) {
    set_error(e.what());
    return PMF_ERR_CONFIG;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return PMF_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return PMF_ERR_INTERNAL;
  }
}

} // namespace

struct pmf_scenario {
  std::string name;
  std::map<std::string, std::string> overrides;
  pmflow::Scenario built;

  void rebuild() { built = pmflow::build_scenario(name, overrides); }
};

struct pmf_run {
  pmflow::RunSummary summary;
};

extern "C" {

const char* pmf_error_message(void) { return g_last_error.c_str(); }

int pmf_scenario_count(void) {
  return static_cast<int>(pmflow::scenario_names().size());
}

const char* pmf_scenario_name_at(int index) {
  static const std::vector<std::string> names = pmflow::scenario_names();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  return names[static_cast<size_t>(index)].c_str();
}

pmf_status pmf_scenario_create(const char* name, pmf_scenario** out) {
  if (name == nullptr || out == nullptr) {
    set_error("pmf_scenario_create: null argument");
    return PMF_ERR_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&]() {
    auto sc = std::make_unique<pmf_scenario>();
    sc->name = name;
    sc->rebuild();
    *out = sc.release();
    return PMF_OK;
  });
}

pmf_status pmf_scenario_set(pmf_scenario* sc, const char* key, const char* value) {
  if (sc == nullptr || key == nullptr || value == nullptr) {
    set_error("pmf_scenario_set: null argument");
    return PMF_ERR_ARGUMENT;
  }
  return guarded([&]() {
    auto saved = sc->overrides;
    sc->overrides[key] = value;
    try {
      sc->rebuild();
    } catch (...) {
      sc->overrides = std::move(saved);
      throw;
    }
    return PMF_OK;
  });
}

pmf_status pmf_scenario_load_cell_field(pmf_scenario* sc, const char* field,
                                        const char* path) {
  if (sc == nullptr || field == nullptr || path == nullptr) {
    set_error("pmf_scenario_load_cell_field: null argument");
    return PMF_ERR_ARGUMENT;
  }
  return guarded([&]() {
    const std::string which = field;
    if (which != "permeability" && which != "porosity") {
      set_error("unknown cell field '" + which + "'");
      return PMF_ERR_ARGUMENT;
    }
    std::vector<double> values;
    try {
      values = pmflow::load_cell_field_file(path, sc->built.grid.nx,
                                            sc->built.grid.nz);
    } catch (const pmflow::ConfigError& e) {
      set_error(e.what());
      return PMF_ERR_IO;
    }
    if (which == "permeability")
      sc->built.rock.permeability = std::move(values);
    else
      sc->built.rock.porosity = std::move(values);
    pmflow::audit_scenario(sc->built);
    return PMF_OK;
  });
}

pmf_status pmf_scenario_dims(const pmf_scenario* sc, int* nx, int* nz) {
  if (sc == nullptr) {
    set_error("pmf_scenario_dims: null scenario");
    return PMF_ERR_ARGUMENT;
  }
  if (nx != nullptr) *nx = sc->built.grid.nx;
  if (nz != nullptr) *nz = sc->built.grid.nz;
  return PMF_OK;
}

double pmf_scenario_pore_volume(const pmf_scenario* sc) {
  if (sc == nullptr) return 0.0;
  double pv = 0.0;
  for (int c = 0; c < sc->built.grid.num_cells(); ++c)
    pv += sc->built.grid.cell_volume * sc->built.rock.porosity[c];
  return pv;
}

double pmf_scenario_default_dt(const pmf_scenario* sc) {
  return sc == nullptr ? 0.0 : sc->built.schedule.dt;
}

double pmf_scenario_t_max(const pmf_scenario* sc) {
  return sc == nullptr ? 0.0 : sc->built.schedule.t_max;
}

void pmf_scenario_destroy(pmf_scenario* sc) { delete sc; }

void pmf_run_options_init(pmf_run_options* opt) {
  if (opt == nullptr) return;
  *opt = pmf_run_options{};
  opt->solver = PMF_SOLVER_NEWTON;
  opt->tolerance = PMF_TOLERANCE_FIXED;
  opt->fixed_subproblem_tol = 1e-6;
  opt->outer_tol = 1e-8;
  opt->dt_seconds = 0.0;
  opt->max_outer = 200;
  opt->max_inner = 50;
  opt->max_retries = 4;
  opt->snapshot_times = nullptr;
  opt->snapshot_count = 0;
}

namespace {

pmflow::SolverKind to_kind(pmf_solver s) {
  switch (s) {
    case PMF_SOLVER_NEWTON: return pmflow::SolverKind::Newton;
    case PMF_SOLVER_SFI_UT: return pmflow::SolverKind::SfiUt;
    case PMF_SOLVER_FSMSN_P: return pmflow::SolverKind::FsmsnP;
    case PMF_SOLVER_FSMSN_UT: return pmflow::SolverKind::FsmsnUt;
    case PMF_SOLVER_MSPIN_P: return pmflow::SolverKind::MspinP;
  }
  throw std::invalid_argument("invalid solver enum");
}

pmflow::ToleranceKind to_tolerance(pmf_tolerance t) {
  switch (t) {
    case PMF_TOLERANCE_FIXED: return pmflow::ToleranceKind::Fixed;
    case PMF_TOLERANCE_A1: return pmflow::ToleranceKind::A1;
    case PMF_TOLERANCE_A2: return pmflow::ToleranceKind::A2;
    case PMF_TOLERANCE_A3: return pmflow::ToleranceKind::A3;
  }
  throw std::invalid_argument("invalid tolerance enum");
}

} // namespace

pmf_status pmf_run_simulation(const pmf_scenario* sc, const pmf_run_options* opt,
                              pmf_run** out) {
  if (sc == nullptr || opt == nullptr || out == nullptr) {
    set_error("pmf_run_simulation: null argument");
    return PMF_ERR_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&]() {
    const pmflow::Scenario& scenario = sc->built;
    pmflow::Assembler assembler(scenario.grid, scenario.rock, scenario.fluid,
                                scenario.wells);
    pmflow::SolverControls controls;
    controls.outer_tol = opt->outer_tol;
    controls.max_outer = opt->max_outer;
    controls.max_inner = opt->max_inner;
    pmflow::ToleranceStrategy strategy(to_tolerance(opt->tolerance),
                                       opt->fixed_subproblem_tol, opt->outer_tol);
    pmflow::Schedule schedule = scenario.schedule;
    if (opt->dt_seconds > 0.0) schedule.dt = opt->dt_seconds;
    schedule.max_retries = opt->max_retries;
    std::vector<double> snaps;
    for (int i = 0; i < opt->snapshot_count; ++i)
      snaps.push_back(opt->snapshot_times[i]);

    auto run = std::make_unique<pmf_run>();
    run->summary =
        pmflow::run_simulation(assembler, to_kind(opt->solver), strategy, controls,
                               schedule, scenario.initial, snaps);
    *out = run.release();
    return PMF_OK;
  });
}

int pmf_run_converged(const pmf_run* run) {
  return run != nullptr && run->summary.completed ? 1 : 0;
}

int pmf_run_step_count(const pmf_run* run) {
  return run == nullptr ? 0 : static_cast<int>(run->summary.steps.size());
}

long long pmf_run_outer_iterations(const pmf_run* run) {
  return run == nullptr ? 0 : run->summary.outer_total;
}

long long pmf_run_pressure_iterations(const pmf_run* run) {
  return run == nullptr ? 0 : run->summary.pressure_total;
}

long long pmf_run_transport_iterations(const pmf_run* run) {
  return run == nullptr ? 0 : run->summary.transport_total;
}

double pmf_run_iterations_per_step(const pmf_run* run) {
  return run == nullptr ? 0.0 : run->summary.iterations_per_step();
}

double pmf_run_max_cfl(const pmf_run* run) {
  return run == nullptr ? 0.0 : run->summary.max_cfl;
}

int pmf_run_restart_count(const pmf_run* run) {
  return run == nullptr ? 0 : run->summary.restart_count;
}

double pmf_run_pvi(const pmf_run* run) {
  return run == nullptr ? 0.0 : run->summary.pvi();
}

double pmf_run_volume_balance_error(const pmf_run* run) {
  return run == nullptr ? 0.0 : run->summary.volume_balance_error;
}

int pmf_run_history(const pmf_run* run, int step, double* out, int capacity) {
  if (run == nullptr || step < 0 ||
      step >= static_cast<int>(run->summary.steps.size()))
    return 0;
  const auto& hist = run->summary.steps[static_cast<size_t>(step)].report.residual_history;
  const int n = static_cast<int>(hist.size());
  if (out != nullptr)
    std::memcpy(out, hist.data(),
                static_cast<size_t>(std::min(n, capacity)) * sizeof(double));
  return n;
}

int pmf_run_snapshot_count(const pmf_run* run) {
  return run == nullptr ? 0 : static_cast<int>(run->summary.snapshots.size());
}

pmf_status pmf_run_snapshot_time(const pmf_run* run, int index, double* seconds) {
  if (run == nullptr || index < 0 ||
      index >= static_cast<int>(run->summary.snapshots.size())) {
    set_error("pmf_run_snapshot_time: index out of range");
    return PMF_ERR_ARGUMENT;
  }
  if (seconds != nullptr)
    *seconds = run->summary.snapshots[static_cast<size_t>(index)].time;
  return PMF_OK;
}

pmf_status pmf_run_snapshot_fields(const pmf_run* run, int index, double* pressure,
                                   double* saturation, int capacity) {
  if (run == nullptr || index < 0 ||
      index >= static_cast<int>(run->summary.snapshots.size())) {
    set_error("pmf_run_snapshot_fields: index out of range");
    return PMF_ERR_ARGUMENT;
  }
  const pmflow::Snapshot& snap = run->summary.snapshots[static_cast<size_t>(index)];
  const int n = snap.state.size();
  if (capacity < n) {
    set_error("pmf_run_snapshot_fields: capacity too small");
    return PMF_ERR_ARGUMENT;
  }
  if (pressure != nullptr)
    std::memcpy(pressure, snap.state.p.data(), static_cast<size_t>(n) * sizeof(double));
  if (saturation != nullptr)
    std::memcpy(saturation, snap.state.s.data(), static_cast<size_t>(n) * sizeof(double));
  return PMF_OK;
}

void pmf_run_destroy(pmf_run* run) { delete run; }

pmf_status pmf_find_dt_for_max_cfl(const pmf_scenario* sc,
                                   const pmf_run_options* opt, double target_cfl,
                                   double rel_tol, double* dt_seconds) {
  if (sc == nullptr || opt == nullptr || dt_seconds == nullptr) {
    set_error("pmf_find_dt_for_max_cfl: null argument");
    return PMF_ERR_ARGUMENT;
  }
  return guarded([&]() {
    const pmflow::Scenario& scenario = sc->built;
    pmflow::Assembler assembler(scenario.grid, scenario.rock, scenario.fluid,
                                scenario.wells);
    pmflow::SolverControls controls;
    controls.outer_tol = opt->outer_tol;
    controls.max_outer = opt->max_outer;
    controls.max_inner = opt->max_inner;
    pmflow::ToleranceStrategy strategy(to_tolerance(opt->tolerance),
                                       opt->fixed_subproblem_tol, opt->outer_tol);
    pmflow::Schedule schedule = scenario.schedule;
    if (opt->dt_seconds > 0.0) schedule.dt = opt->dt_seconds;
    schedule.max_retries = opt->max_retries;
    *dt_seconds = pmflow::find_dt_for_max_cfl(assembler, to_kind(opt->solver),
                                              strategy, controls, schedule,
                                              scenario.initial, target_cfl, rel_tol);
    return PMF_OK;
  });
}

} // extern "C"
