#include "core/flux.hpp"

namespace pmflow {

namespace {

constexpr int dPK = 0, dPL = 1, dSK = 2, dSL = 3;

} // namespace

PhaseFlux ppu_phase_flux(const IfaceGeom& geom, double pk, double pl, double sk,
                         double sl, const FluidProps& fluid) {
  const double dd = geom.depth_k - geom.depth_l;
  const double dp = pk - pl;
  const MobilityEval mk = mobilities(sk, fluid);
  const MobilityEval ml = mobilities(sl, fluid);

  PhaseFlux out;
  const double rhos[2] = {fluid.rho_w, fluid.rho_nw};
  for (int phase = 0; phase < 2; ++phase) {
    const double rho = rhos[phase];
    const double dphi = dp - rho * units::gravity * dd;
    const bool up_k = dphi >= 0.0;
    const MobilityEval& up = up_k ? mk : ml;
    const double lam = phase == 0 ? up.lambda_w : up.lambda_nw;
    const double dlam = phase == 0 ? up.dlambda_w_ds : up.dlambda_nw_ds;

    const double f = geom.trans * lam * rho * dphi;
    double& fval = phase == 0 ? out.fw : out.fnw;
    std::array<double, 4>& d = phase == 0 ? out.dfw : out.dfnw;
    fval = f;
    d[dPK] = geom.trans * lam * rho;
    d[dPL] = -d[dPK];
    d[up_k ? dSK : dSL] = geom.trans * rho * dlam * dphi;
  }
  return out;
}

TotalVelocity total_velocity_flux(const IfaceGeom& geom, double pk, double pl,
                                  double sk, double sl, const FluidProps& fluid) {
  const double dd = geom.depth_k - geom.depth_l;
  const double dp = pk - pl;
  const MobilityEval mk = mobilities(sk, fluid);
  const MobilityEval ml = mobilities(sl, fluid);

  TotalVelocity out;
  const double rhos[2] = {fluid.rho_w, fluid.rho_nw};
  for (int phase = 0; phase < 2; ++phase) {
    const double rho = rhos[phase];
    const double dphi = dp - rho * units::gravity * dd;
    const bool up_k = dphi >= 0.0;
    const MobilityEval& up = up_k ? mk : ml;
    const double lam = phase == 0 ? up.lambda_w : up.lambda_nw;
    const double dlam = phase == 0 ? up.dlambda_w_ds : up.dlambda_nw_ds;

    out.ut += geom.trans * lam * dphi;
    out.dut[dPK] += geom.trans * lam;
    out.dut[dPL] -= geom.trans * lam;
    out.dut[up_k ? dSK : dSL] += geom.trans * dlam * dphi;
  }
  return out;
}

namespace {

// Shared IHU evaluation given a total velocity with (possibly zero) derivatives.
PhaseFlux ihu_from_ut(const IfaceGeom& geom, const TotalVelocity& tv, double sk,
                      double sl, const FluidProps& fluid) {
  const double dd = geom.depth_k - geom.depth_l;

  // Viscous part: both mobilities from the cell upstream of u_T.
  const bool visc_k = tv.ut >= 0.0;
  const MobilityEval mv = mobilities(visc_k ? sk : sl, fluid);
  const double lt = mv.total();
  const double fw = mv.lambda_w / lt;
  const double dfw_dsv = (mv.dlambda_w_ds * lt - mv.lambda_w * mv.dtotal_ds()) / (lt * lt);

  // Buoyancy part: heavier (wetting) mobility from the upper cell, lighter
  // from the lower cell. The wetting phase is assumed the denser one.
  const bool upper_k = geom.depth_k <= geom.depth_l;
  const double s_upper = upper_k ? sk : sl;
  const double s_lower = upper_k ? sl : sk;
  const MobilityEval mu = mobilities(s_upper, fluid);
  const MobilityEval mlow = mobilities(s_lower, fluid);
  const double lgw = mu.lambda_w;
  const double lgnw = mlow.lambda_nw;
  const double lgt = lgw + lgnw;
  double beta = 0.0, dbeta_dsu = 0.0, dbeta_dsl = 0.0;
  if (lgt > 0.0) {
    beta = lgw * lgnw / lgt;
    dbeta_dsu = mu.dlambda_w_ds * (lgnw / lgt) * (lgnw / lgt);
    dbeta_dsl = mlow.dlambda_nw_ds * (lgw / lgt) * (lgw / lgt);
  }
  const double gfac = geom.trans * (fluid.rho_nw - fluid.rho_w) * units::gravity * dd;
  const double b = gfac * beta;
  std::array<double, 4> db{};
  db[upper_k ? dSK : dSL] += gfac * dbeta_dsu;
  db[upper_k ? dSL : dSK] += gfac * dbeta_dsl;

  PhaseFlux out;
  out.fw = fluid.rho_w * (fw * tv.ut + b);
  out.fnw = fluid.rho_nw * ((1.0 - fw) * tv.ut - b);
  for (int i = 0; i < 4; ++i) {
    double dfw_di = fw * tv.dut[i] + db[i];
    double dfnw_di = (1.0 - fw) * tv.dut[i] - db[i];
    if (i == (visc_k ? dSK : dSL)) {
      dfw_di += tv.ut * dfw_dsv;
      dfnw_di -= tv.ut * dfw_dsv;
    }
    out.dfw[i] = fluid.rho_w * dfw_di;
    out.dfnw[i] = fluid.rho_nw * dfnw_di;
  }
  return out;
}

} // namespace

PhaseFlux ihu_phase_flux_live(const IfaceGeom& geom, double pk, double pl,
                              double sk, double sl, const FluidProps& fluid) {
  return ihu_from_ut(geom, total_velocity_flux(geom, pk, pl, sk, sl, fluid), sk,
                     sl, fluid);
}

PhaseFlux ihu_phase_flux_frozen(const IfaceGeom& geom, double ut, double sk,
                                double sl, const FluidProps& fluid) {
  TotalVelocity tv;
  tv.ut = ut;
  return ihu_from_ut(geom, tv, sk, sl, fluid);
}

void validate_wells(const WellSet& wells, int num_cells) {
  for (const Injector& w : wells.injectors) {
    if (w.cell < 0 || w.cell >= num_cells)
      throw ConfigError("injector perforates an invalid cell");
    if (w.rate < 0.0)
      throw ConfigError("injector rate must be nonnegative");
  }
  for (const Producer& w : wells.producers) {
    if (w.cell < 0 || w.cell >= num_cells)
      throw ConfigError("producer perforates an invalid cell");
    if (w.rate < 0.0)
      throw ConfigError("producer rate must be nonnegative");
  }
}

WellSource well_source(const WellSet& wells, int cell, double s,
                       const FluidProps& fluid, double cell_volume) {
  WellSource q;
  for (const Injector& w : wells.injectors)
    if (w.cell == cell) q.qw += fluid.rho_w * w.rate / cell_volume;
  for (const Producer& w : wells.producers) {
    if (w.cell != cell) continue;
    const MobilityEval m = mobilities(s, fluid);
    const double lt = m.total();
    const double fw = m.lambda_w / lt;
    const double dfw = (m.dlambda_w_ds * lt - m.lambda_w * m.dtotal_ds()) / (lt * lt);
    const double scale = w.rate / cell_volume;
    q.qw -= fluid.rho_w * fw * scale;
    q.qnw -= fluid.rho_nw * (1.0 - fw) * scale;
    q.dqw_ds -= fluid.rho_w * dfw * scale;
    q.dqnw_ds += fluid.rho_nw * dfw * scale;
  }
  return q;
}

} // namespace pmflow
