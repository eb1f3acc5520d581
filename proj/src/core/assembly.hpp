#pragma once

#include <vector>

#include "core/flux.hpp"
#include "core/grid.hpp"
#include "core/sparse.hpp"

namespace pmflow {

/// Primary unknowns at one time level.
struct State {
  std::vector<double> p; // Pa
  std::vector<double> s; // wetting saturation

  int size() const { return static_cast<int>(p.size()); }
};

/// Residual rows and Jacobian blocks of the field-split form of the coupled
/// problem. The pressure row is the phase sum g = r_nw + r_w and the transport
/// row is the wetting residual h = r_w; the blocks are their derivatives. The
/// phase residuals are recovered as r_w = h, r_nw = g - h.
struct SplitSystem {
  std::vector<double> g; // kg/s per cell
  std::vector<double> h; // kg/s per cell
  SparseMatrix app;      // d g / d p
  SparseMatrix aps;      // d g / d s
  SparseMatrix asp;      // d h / d p
  SparseMatrix ass;      // d h / d s

  BlockSystem blocks() const { return {&app, &aps, &asp, &ass}; }
};

/// Transport subproblem formulations used by the split solvers.
enum class TransportVariant { FixedPressurePPU, FixedTotalVelocityIHU };

/// Finite-volume assembler bound to one grid / rock / fluid / well
/// description. Assembly is a pure function of the passed states; the
/// assembler itself only caches the sparsity pattern and transmissibilities.
class Assembler {
public:
  Assembler(const Grid& grid, const RockProps& rock, const FluidProps& fluid,
            WellSet wells);

  /// Coupled residual and all four Jacobian blocks (Newton and global steps).
  /// Under IHU the interface total velocity is a live function of (p, s) and
  /// the flux derivatives carry the full chain rule.
  void assemble_coupled(const State& x, const State& prev, double dt,
                        FluxScheme scheme, SplitSystem& out) const;

  /// Transport subproblem h = r_w at a frozen pressure (PPU fluxes evaluated
  /// at x.p). Fills h, ass and asp (the pressure derivatives are assembled
  /// against the live pressure for block reuse); g, app, aps are zeroed.
  void assemble_transport_fixed_pressure(const State& x, const State& prev,
                                         double dt, SplitSystem& out) const;

  /// Transport subproblem h = r_w with a frozen per-interface total velocity
  /// (IHU fractional-flow form). The pressure derivative of h is exactly zero.
  void assemble_transport_fixed_ut(const State& x, const State& prev, double dt,
                                   const std::vector<double>& frozen_ut,
                                   SplitSystem& out) const;

  /// Per-interface volumetric total velocity at the given state, with the same
  /// per-phase potential upwinding used by the flux schemes.
  std::vector<double> total_velocity(const State& x) const;

  /// Per-interface phase mass fluxes at the given state (for CFL diagnostics).
  void phase_fluxes(const State& x, FluxScheme scheme, std::vector<double>& fw,
                    std::vector<double>& fnw) const;

  /// Prepares a split system with the pattern of this assembler (all values zero).
  void init_system(SplitSystem& out) const;

  const Grid& grid() const { return *grid_; }
  const RockProps& rock() const { return *rock_; }
  const FluidProps& fluid() const { return *fluid_; }
  const WellSet& wells() const { return wells_; }
  const std::vector<double>& transmissibility() const { return trans_; }
  double pore_volume(int cell) const {
    return grid_->cell_volume * rock_->porosity[cell];
  }

private:
  struct IfaceSlots {
    int kk, kl, lk, ll;
  };
  void assemble(const State& x, const State& prev, double dt, FluxScheme scheme,
                const std::vector<double>* frozen_ut, bool fixed_pressure,
                SplitSystem& out) const;

  const Grid* grid_;
  const RockProps* rock_;
  const FluidProps* fluid_;
  WellSet wells_;
  std::vector<double> trans_;
  SparseMatrix pattern_;          // shared sparsity of every block
  std::vector<IfaceSlots> slots_; // per-interface value slots in the pattern
  std::vector<int> diag_slots_;   // per-cell diagonal slot
};

} // namespace pmflow
