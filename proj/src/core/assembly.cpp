#include "core/assembly.hpp"

#include <stdexcept>

namespace pmflow {

Assembler::Assembler(const Grid& grid, const RockProps& rock,
                     const FluidProps& fluid, WellSet wells)
    : grid_(&grid), rock_(&rock), fluid_(&fluid), wells_(std::move(wells)) {
  validate_rock(grid, rock);
  validate_fluid(fluid);
  validate_wells(wells_, grid.num_cells());
  trans_ = tpfa_transmissibility(grid, rock);

  // Sparsity pattern (diagonal + grid adjacency), shared by all four blocks.
  const int m = grid.num_cells();
  std::vector<Triplet> trips;
  trips.reserve(m + 2 * grid.interfaces.size());
  for (int c = 0; c < m; ++c) trips.push_back({c, c, 0.0});
  for (const Interface& f : grid.interfaces) {
    trips.push_back({f.k, f.l, 0.0});
    trips.push_back({f.l, f.k, 0.0});
  }
  pattern_ = from_triplets(m, m, std::move(trips));

  diag_slots_.resize(m);
  for (int c = 0; c < m; ++c) diag_slots_[c] = pattern_.find(c, c);
  slots_.resize(grid.interfaces.size());
  for (size_t f = 0; f < grid.interfaces.size(); ++f) {
    const Interface& iface = grid.interfaces[f];
    slots_[f] = {pattern_.find(iface.k, iface.k), pattern_.find(iface.k, iface.l),
                 pattern_.find(iface.l, iface.k), pattern_.find(iface.l, iface.l)};
  }
}

void Assembler::init_system(SplitSystem& out) const {
  const int m = grid_->num_cells();
  out.g.assign(m, 0.0);
  out.h.assign(m, 0.0);
  out.app = pattern_;
  out.aps = pattern_;
  out.asp = pattern_;
  out.ass = pattern_;
}

void Assembler::assemble_coupled(const State& x, const State& prev, double dt,
                                 FluxScheme scheme, SplitSystem& out) const {
  assemble(x, prev, dt, scheme, nullptr, false, out);
}

void Assembler::assemble_transport_fixed_pressure(const State& x, const State& prev,
                                                  double dt, SplitSystem& out) const {
  assemble(x, prev, dt, FluxScheme::PPU, nullptr, true, out);
}

void Assembler::assemble_transport_fixed_ut(const State& x, const State& prev,
                                            double dt,
                                            const std::vector<double>& frozen_ut,
                                            SplitSystem& out) const {
  if (frozen_ut.size() != grid_->interfaces.size())
    throw ConfigError("frozen total velocity is required per interface");
  assemble(x, prev, dt, FluxScheme::IHU, &frozen_ut, true, out);
}

void Assembler::assemble(const State& x, const State& prev, double dt,
                         FluxScheme scheme, const std::vector<double>* frozen_ut,
                         bool fixed_pressure, SplitSystem& out) const {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const int m = grid_->num_cells();
  if (x.size() != m || prev.size() != m)
    throw std::invalid_argument("state size does not match the grid");

  if (out.g.size() != static_cast<size_t>(m) || out.app.nnz() != pattern_.nnz())
    init_system(out);
  std::fill(out.g.begin(), out.g.end(), 0.0);
  std::fill(out.h.begin(), out.h.end(), 0.0);
  out.app.set_zero();
  out.aps.set_zero();
  out.asp.set_zero();
  out.ass.set_zero();

  const bool transport_only = fixed_pressure || frozen_ut != nullptr;
  const double rho_w = fluid_->rho_w;
  const double rho_nw = fluid_->rho_nw;

  // Accumulation: V phi (rho_l s_l^{n+1} - rho_l s_l^n) / dt, s_nw = 1 - s.
  for (int c = 0; c < m; ++c) {
    const double vphi = pore_volume(c);
    const double ds = x.s[c] - prev.s[c];
    const double rw = vphi * rho_w * ds / dt;
    const double rnw = -vphi * rho_nw * ds / dt;
    out.h[c] += rw;
    out.ass.values[diag_slots_[c]] += vphi * rho_w / dt;
    if (!transport_only) {
      out.g[c] += rw + rnw;
      out.aps.values[diag_slots_[c]] += vphi * (rho_w - rho_nw) / dt;
    }
  }

  // Interface fluxes.
  for (size_t f = 0; f < grid_->interfaces.size(); ++f) {
    const Interface& iface = grid_->interfaces[f];
    const IfaceGeom geom{trans_[f], grid_->depth[iface.k], grid_->depth[iface.l]};
    const double sk = x.s[iface.k];
    const double sl = x.s[iface.l];

    PhaseFlux flux;
    if (frozen_ut != nullptr) {
      flux = ihu_phase_flux_frozen(geom, (*frozen_ut)[f], sk, sl, *fluid_);
    } else {
      const double pk = x.p[iface.k];
      const double pl = x.p[iface.l];
      flux = scheme == FluxScheme::PPU
                 ? ppu_phase_flux(geom, pk, pl, sk, sl, *fluid_)
                 : ihu_phase_flux_live(geom, pk, pl, sk, sl, *fluid_);
    }

    out.h[iface.k] += flux.fw;
    out.h[iface.l] -= flux.fw;
    out.g[iface.k] += flux.fw + flux.fnw;
    out.g[iface.l] -= flux.fw + flux.fnw;

    const IfaceSlots& sl4 = slots_[f];
    // columns: [0] p_k, [1] p_l, [2] s_k, [3] s_l
    out.asp.values[sl4.kk] += flux.dfw[0];
    out.asp.values[sl4.kl] += flux.dfw[1];
    out.asp.values[sl4.lk] -= flux.dfw[0];
    out.asp.values[sl4.ll] -= flux.dfw[1];
    out.ass.values[sl4.kk] += flux.dfw[2];
    out.ass.values[sl4.kl] += flux.dfw[3];
    out.ass.values[sl4.lk] -= flux.dfw[2];
    out.ass.values[sl4.ll] -= flux.dfw[3];
    if (!transport_only) {
      out.app.values[sl4.kk] += flux.dfw[0] + flux.dfnw[0];
      out.app.values[sl4.kl] += flux.dfw[1] + flux.dfnw[1];
      out.app.values[sl4.lk] -= flux.dfw[0] + flux.dfnw[0];
      out.app.values[sl4.ll] -= flux.dfw[1] + flux.dfnw[1];
      out.aps.values[sl4.kk] += flux.dfw[2] + flux.dfnw[2];
      out.aps.values[sl4.kl] += flux.dfw[3] + flux.dfnw[3];
      out.aps.values[sl4.lk] -= flux.dfw[2] + flux.dfnw[2];
      out.aps.values[sl4.ll] -= flux.dfw[3] + flux.dfnw[3];
    }
  }

  // Wells: r_l -= V q_l.
  const double v = grid_->cell_volume;
  for (const Injector& w : wells_.injectors) {
    const double qw_mass = rho_w * w.rate; // V * q_w
    out.h[w.cell] -= qw_mass;
    if (!transport_only) out.g[w.cell] -= qw_mass;
  }
  for (const Producer& w : wells_.producers) {
    const WellSource q = well_source({{}, {w}}, w.cell, x.s[w.cell], *fluid_, v);
    out.h[w.cell] -= v * q.qw;
    out.ass.values[diag_slots_[w.cell]] -= v * q.dqw_ds;
    if (!transport_only) {
      out.g[w.cell] -= v * (q.qw + q.qnw);
      out.aps.values[diag_slots_[w.cell]] -= v * (q.dqw_ds + q.dqnw_ds);
    }
  }
}

std::vector<double> Assembler::total_velocity(const State& x) const {
  std::vector<double> ut(grid_->interfaces.size());
  for (size_t f = 0; f < grid_->interfaces.size(); ++f) {
    const Interface& iface = grid_->interfaces[f];
    const IfaceGeom geom{trans_[f], grid_->depth[iface.k], grid_->depth[iface.l]};
    ut[f] = total_velocity_flux(geom, x.p[iface.k], x.p[iface.l], x.s[iface.k],
                                x.s[iface.l], *fluid_)
                .ut;
  }
  return ut;
}

void Assembler::phase_fluxes(const State& x, FluxScheme scheme,
                             std::vector<double>& fw, std::vector<double>& fnw) const {
  fw.resize(grid_->interfaces.size());
  fnw.resize(grid_->interfaces.size());
  for (size_t f = 0; f < grid_->interfaces.size(); ++f) {
    const Interface& iface = grid_->interfaces[f];
    const IfaceGeom geom{trans_[f], grid_->depth[iface.k], grid_->depth[iface.l]};
    const double pk = x.p[iface.k], pl = x.p[iface.l];
    const double sk = x.s[iface.k], sl = x.s[iface.l];
    const PhaseFlux flux = scheme == FluxScheme::PPU
                               ? ppu_phase_flux(geom, pk, pl, sk, sl, *fluid_)
                               : ihu_phase_flux_live(geom, pk, pl, sk, sl, *fluid_);
    fw[f] = flux.fw;
    fnw[f] = flux.fnw;
  }
}

} // namespace pmflow
