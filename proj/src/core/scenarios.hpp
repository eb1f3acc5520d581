#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/assembly.hpp"
#include "core/timeloop.hpp"

namespace pmflow {

/// Complete description of one benchmark run: grid, rock, fluids, wells,
/// initial state and schedule.
struct Scenario {
  std::string name;
  Grid grid;
  RockProps rock;
  FluidProps fluid;
  WellSet wells;
  State initial;
  Schedule schedule;
  std::uint64_t seed = 0;
};

/// Sanity audit: consistent sizes, valid and rate-balanced wells, physical
/// initial saturations. Throws ConfigError on violation.
void audit_scenario(const Scenario& sc);

/// Gravity segregation (lock exchange): 100 x 100 vertical x-z domain of
/// 30.48 m x 30.48 m, wetting phase left / non-wetting right, uniform 200 mD,
/// no wells, 500 days.
struct GravitySegregationOptions {
  int nx = 100, nz = 100;
  double dx = 0.3048, dz = 0.3048; // m
  double perm_md = 200.0;
  double porosity = 0.2;
  double dt_days = 10.0;
  double t_max_days = 500.0;
  double p_init = 1.0e7; // Pa
};
Scenario gravity_segregation(const GravitySegregationOptions& opt = {});

/// Horizontal five-spot on a seeded log-normal permeability field: center
/// injector, four corner producers, 0.1 PVI over 500 days.
struct FiveSpotOptions {
  int nx = 60, nz = 220;
  double dx = 6.096, dz = 3.048; // m
  double thickness = 0.6096;     // m
  double mean_perm_md = 100.0;
  double variance = 2.0; // variance of log-permeability
  double porosity = 0.2;
  double corr_cells = 4.0;
  double pvi_target = 0.1;
  double t_max_days = 500.0;
  int num_steps = 20;
  double p_init = 1.0e7;
  std::uint64_t seed = 2027;
};
Scenario heterogeneous_five_spot(std::uint64_t seed, double variance);
Scenario heterogeneous_five_spot(const FiveSpotOptions& opt);

/// Tilted variant of the five-spot: 60 degree tilt, configurable injection
/// rate (fast 9.352 m^3/day or slow 0.9352 m^3/day), 0.08 PVI.
struct TiltedBuoyancyOptions {
  FiveSpotOptions base;
  double tilt_deg = 60.0;
  double rate_m3_per_day = 9.352;
  double pvi_target = 0.08;
  int num_steps = 16;
};
Scenario tilted_buoyancy(std::uint64_t seed, double rate_m3_per_day);
Scenario tilted_buoyancy(const TiltedBuoyancyOptions& opt);

/// Vertical x-z domain with seeded high-contrast channels, injector
/// perforating 20 cells top-right and producer 20 cells bottom-left,
/// 1500 days (0.56 PVI).
struct FracturedChannelOptions {
  int nx = 100, nz = 50;
  double dx = 0.6096, dz = 0.6096;
  double background_md = 20.0;
  double contrast = 1.0e4;
  int num_channels = 6;
  double porosity = 0.2;
  double pvi_target = 0.56;
  double t_max_days = 1500.0;
  int num_steps = 15;
  double p_init = 1.0e7;
  std::uint64_t seed = 7;
};
Scenario fractured_channels(std::uint64_t seed);
Scenario fractured_channels(const FracturedChannelOptions& opt);

/// Two-cell verification case used by oracles and property tests.
struct TwoCellOptions {
  bool vertical = false;
  double dx = 1.0, dz = 1.0;
  double perm_md_k = 200.0, perm_md_l = 200.0;
  double porosity = 0.2;
  double s_k = 1.0, s_l = 0.0;
  double p_k = 1.0e7, p_l = 1.0e7;
  bool with_wells = false;
  double rate_m3_per_day = 0.05;
  double dt_days = 1.0;
  double t_max_days = 1.0;
  bool segregation_fluids = true; // rho_nw = 785 (else 849)
};
Scenario two_cell_case(const TwoCellOptions& opt = {});

/// 1D horizontal Buckley-Leverett column with an injector in the first cell
/// and a producer in the last, sized for pvi_target over the schedule.
struct Bl1dOptions {
  int n = 100;
  double dx = 1.0;
  double perm_md = 100.0;
  double porosity = 0.2;
  double pvi_target = 0.2;
  double t_max_days = 200.0;
  int num_steps = 10;
  double p_init = 1.0e7;
};
Scenario bl_1d_case(int n);
Scenario bl_1d_case(const Bl1dOptions& opt);

/// Seeded correlated Gaussian field (zero mean, unit variance) used for the
/// log-normal permeability generators. Deterministic given (seed, dims).
std::vector<double> correlated_gaussian_field(int nx, int nz, double corr_cells,
                                              std::uint64_t seed);

/// Named-scenario registry used by the C API and the CLI. Overrides are
/// string key/value pairs (e.g. "nx", "dt_days", "variance"); unknown keys
/// are rejected.
std::vector<std::string> scenario_names();
Scenario build_scenario(const std::string& name,
                        const std::map<std::string, std::string>& overrides = {});

} // namespace pmflow
