#pragma once

#include <array>
#include <vector>

#include "core/fluid.hpp"
#include "core/units.hpp"

namespace pmflow {

/// Upwinding scheme for the transport coefficients of the numerical flux.
enum class FluxScheme { PPU, IHU };

/// Geometric data of one interface needed by the flux kernels.
struct IfaceGeom {
  double trans = 0.0;   // TPFA transmissibility, m^3
  double depth_k = 0.0; // m
  double depth_l = 0.0; // m
};

/// Mass fluxes (kg/s, oriented K -> L) and derivatives with respect to
/// (p_K, p_L, s_K, s_L).
struct PhaseFlux {
  double fw = 0.0;
  double fnw = 0.0;
  std::array<double, 4> dfw{};
  std::array<double, 4> dfnw{};
};

/// Volumetric total flux (m^3/s, oriented K -> L) and derivatives with respect
/// to (p_K, p_L, s_K, s_L).
struct TotalVelocity {
  double ut = 0.0;
  std::array<double, 4> dut{};
};

/// Phase-potential upwinding: each phase is upwinded independently by the sign
/// of its potential difference (p_K - p_L) - rho g (d_K - d_L).
PhaseFlux ppu_phase_flux(const IfaceGeom& geom, double pk, double pl, double sk,
                         double sl, const FluidProps& fluid);

/// Total volumetric flux u_T = sum of phase volumetric fluxes, with the same
/// per-phase potential upwinding of the mobilities.
TotalVelocity total_velocity_flux(const IfaceGeom& geom, double pk, double pl,
                                  double sk, double sl, const FluidProps& fluid);

/// Implicit hybrid upwinding with a live total velocity: the viscous part is
/// upwinded by the sign of u_T(p, s) (full chain rule through u_T), the
/// buoyancy part takes the heavier-phase mobility from the upper cell and the
/// lighter-phase mobility from the lower cell.
PhaseFlux ihu_phase_flux_live(const IfaceGeom& geom, double pk, double pl,
                              double sk, double sl, const FluidProps& fluid);

/// Implicit hybrid upwinding with a frozen interface total velocity: u_T is a
/// constant, so the flux carries no pressure derivatives.
PhaseFlux ihu_phase_flux_frozen(const IfaceGeom& geom, double ut, double sk,
                                double sl, const FluidProps& fluid);

/// Well source terms.
struct Injector {
  int cell = -1;
  double rate = 0.0; // volumetric rate of the wetting phase, m^3/s, >= 0
};
struct Producer {
  int cell = -1;
  double rate = 0.0; // total volumetric rate, m^3/s, >= 0
};
struct WellSet {
  std::vector<Injector> injectors;
  std::vector<Producer> producers;
};

void validate_wells(const WellSet& wells, int num_cells);

/// Mass source densities q (kg/(m^3 s), positive for injection) of all wells
/// perforating one cell, with saturation derivatives. An injector adds wetting
/// mass at a fixed volumetric rate; a producer removes its total volumetric
/// rate split by the in-cell fractional flow lambda_l / lambda_T.
struct WellSource {
  double qw = 0.0;
  double qnw = 0.0;
  double dqw_ds = 0.0;
  double dqnw_ds = 0.0;
};
WellSource well_source(const WellSet& wells, int cell, double s,
                       const FluidProps& fluid, double cell_volume);

} // namespace pmflow
