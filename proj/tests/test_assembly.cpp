#include <random>

#include "core/assembly.hpp"
#include "core/units.hpp"
#include "doctest.h"

using namespace pmflow;

namespace {

const FluidProps kSegFluid{1025.0, 785.0, 3e-4, 3e-3};

struct Case {
  Grid grid;
  RockProps rock;
  WellSet wells;
};

Case make_case(bool vertical, bool with_wells, unsigned seed) {
  Case c;
  c.grid = vertical
               ? build_cartesian_grid(4, 4, 0.5, 0.5, Orientation::Vertical, 0.0)
               : build_cartesian_grid(4, 4, 0.5, 0.5, Orientation::Horizontal, 0.0, 1.0);
  const int m = c.grid.num_cells();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> kdist(50.0, 500.0);
  c.rock.porosity.assign(m, 0.2);
  c.rock.permeability.resize(m);
  for (double& k : c.rock.permeability) k = kdist(rng) * units::milli_darcy;
  if (with_wells) {
    c.wells.injectors.push_back({0, 2e-7});
    c.wells.producers.push_back({m - 1, 2e-7});
  }
  return c;
}

State random_state(int m, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pdist(-4e4, 4e4);
  std::uniform_real_distribution<double> sdist(0.15, 0.85);
  State x;
  x.p.resize(m);
  x.s.resize(m);
  for (int c = 0; c < m; ++c) {
    x.p[c] = 1e7 + pdist(rng);
    x.s[c] = sdist(rng);
  }
  return x;
}

// Reject states with an interface too close to an upwind switch, where the
// one-sided flux derivative legitimately disagrees with central differences.
bool clear_of_switches(const Case& c, const State& x, const FluidProps& fluid) {
  const auto trans = tpfa_transmissibility(c.grid, c.rock);
  for (size_t f = 0; f < c.grid.interfaces.size(); ++f) {
    const Interface& iface = c.grid.interfaces[f];
    const double dd = c.grid.depth[iface.k] - c.grid.depth[iface.l];
    const double dp = x.p[iface.k] - x.p[iface.l];
    for (double rho : {fluid.rho_w, fluid.rho_nw})
      if (std::abs(dp - rho * units::gravity * dd) < 50.0) return false;
    const IfaceGeom geom{trans[f], c.grid.depth[iface.k], c.grid.depth[iface.l]};
    const TotalVelocity tv = total_velocity_flux(geom, x.p[iface.k], x.p[iface.l],
                                                 x.s[iface.k], x.s[iface.l], fluid);
    if (std::abs(tv.ut) < 1e-13) return false;
  }
  return true;
}

void check_block_vs_fd(const Assembler& assembler, const State& x, const State& prev,
                       double dt, FluxScheme scheme) {
  SplitSystem sys;
  assembler.assemble_coupled(x, prev, dt, scheme, sys);

  SplitSystem lo, hi;
  const int m = x.size();
  for (int col = 0; col < m; ++col) {
    // pressure column
    {
      const double step = 1e-7 * std::abs(x.p[col]);
      State xl = x, xh = x;
      xl.p[col] -= step;
      xh.p[col] += step;
      assembler.assemble_coupled(xl, prev, dt, scheme, lo);
      assembler.assemble_coupled(xh, prev, dt, scheme, hi);
      for (int row = 0; row < m; ++row) {
        const double fd_g = (hi.g[row] - lo.g[row]) / (2 * step);
        const double fd_h = (hi.h[row] - lo.h[row]) / (2 * step);
        const int slot = sys.app.find(row, col);
        const double a_g = slot >= 0 ? sys.app.values[slot] : 0.0;
        const double a_h = slot >= 0 ? sys.asp.values[slot] : 0.0;
        CHECK(std::abs(a_g - fd_g) <= 1e-5 * std::max(std::abs(fd_g), 1e-14));
        CHECK(std::abs(a_h - fd_h) <= 1e-5 * std::max(std::abs(fd_h), 1e-14));
      }
    }
    // saturation column
    {
      const double step = 1e-7;
      State xl = x, xh = x;
      xl.s[col] -= step;
      xh.s[col] += step;
      assembler.assemble_coupled(xl, prev, dt, scheme, lo);
      assembler.assemble_coupled(xh, prev, dt, scheme, hi);
      for (int row = 0; row < m; ++row) {
        const double fd_g = (hi.g[row] - lo.g[row]) / (2 * step);
        const double fd_h = (hi.h[row] - lo.h[row]) / (2 * step);
        const int slot = sys.aps.find(row, col);
        const double a_g = slot >= 0 ? sys.aps.values[slot] : 0.0;
        const double a_h = slot >= 0 ? sys.ass.values[slot] : 0.0;
        const double scale_g = std::max(std::abs(fd_g), 1e-10);
        const double scale_h = std::max(std::abs(fd_h), 1e-10);
        CHECK(std::abs(a_g - fd_g) / scale_g <= 1e-5);
        CHECK(std::abs(a_h - fd_h) / scale_h <= 1e-5);
      }
    }
  }
}

} // namespace

TEST_CASE("coupled Jacobian blocks match finite differences (4x4, PPU and IHU)") {
  const double dt = 5.0 * units::day;
  for (const bool vertical : {false, true}) {
    for (const bool wells : {false, true}) {
      const Case c = make_case(vertical, wells, 42u + vertical + 2u * wells);
      const Assembler assembler(c.grid, c.rock, kSegFluid, c.wells);
      unsigned seed = 100;
      State x = random_state(c.grid.num_cells(), seed);
      while (!clear_of_switches(c, x, kSegFluid))
        x = random_state(c.grid.num_cells(), ++seed);
      const State prev = random_state(c.grid.num_cells(), seed + 1000);

      check_block_vs_fd(assembler, x, prev, dt, FluxScheme::PPU);
      check_block_vs_fd(assembler, x, prev, dt, FluxScheme::IHU);
    }
  }
}

TEST_CASE("transport subproblem Jacobians match finite differences") {
  const double dt = 5.0 * units::day;
  const Case c = make_case(true, true, 3u);
  const Assembler assembler(c.grid, c.rock, kSegFluid, c.wells);
  const int m = c.grid.num_cells();
  unsigned seed = 500;
  State x = random_state(m, seed);
  while (!clear_of_switches(c, x, kSegFluid)) x = random_state(m, ++seed);
  const State prev = random_state(m, seed + 1);
  const std::vector<double> ut = assembler.total_velocity(x);

  for (int variant = 0; variant < 2; ++variant) {
    SplitSystem sys, lo, hi;
    auto assemble = [&](const State& state, SplitSystem& out) {
      if (variant == 0)
        assembler.assemble_transport_fixed_pressure(state, prev, dt, out);
      else
        assembler.assemble_transport_fixed_ut(state, prev, dt, ut, out);
    };
    assemble(x, sys);
    const double step = 1e-7;
    for (int col = 0; col < m; ++col) {
      State xl = x, xh = x;
      xl.s[col] -= step;
      xh.s[col] += step;
      assemble(xl, lo);
      assemble(xh, hi);
      for (int row = 0; row < m; ++row) {
        const double fd = (hi.h[row] - lo.h[row]) / (2 * step);
        const int slot = sys.ass.find(row, col);
        const double a = slot >= 0 ? sys.ass.values[slot] : 0.0;
        CHECK(std::abs(a - fd) / std::max(std::abs(fd), 1e-10) <= 1e-5);
      }
    }
    if (variant == 1) { // frozen u_T: no pressure dependence at all
      for (double v : sys.asp.values) CHECK(v == 0.0);
    }
  }
}

TEST_CASE("uniform state without wells or gravity has zero residual") {
  const Case c = make_case(false, false, 9u);
  const Assembler assembler(c.grid, c.rock, kSegFluid, {});
  State x;
  x.p.assign(c.grid.num_cells(), 2e7);
  x.s.assign(c.grid.num_cells(), 0.4);
  SplitSystem sys;
  assembler.assemble_coupled(x, x, 1000.0, FluxScheme::PPU, sys);
  for (int i = 0; i < c.grid.num_cells(); ++i) {
    CHECK(sys.g[i] == 0.0);
    CHECK(sys.h[i] == 0.0);
  }
}

TEST_CASE("residual equals flux divergence when prev == current") {
  const Case c = make_case(true, false, 10u);
  const Assembler assembler(c.grid, c.rock, kSegFluid, {});
  const State x = random_state(c.grid.num_cells(), 77);
  SplitSystem sys;
  assembler.assemble_coupled(x, x, 3600.0, FluxScheme::PPU, sys);

  // accumulation cancels: the residual is the pure flux divergence
  const auto trans = tpfa_transmissibility(c.grid, c.rock);
  std::vector<double> div_w(c.grid.num_cells(), 0.0);
  for (size_t f = 0; f < c.grid.interfaces.size(); ++f) {
    const Interface& iface = c.grid.interfaces[f];
    const IfaceGeom geom{trans[f], c.grid.depth[iface.k], c.grid.depth[iface.l]};
    const PhaseFlux pf = ppu_phase_flux(geom, x.p[iface.k], x.p[iface.l],
                                        x.s[iface.k], x.s[iface.l], kSegFluid);
    div_w[iface.k] += pf.fw;
    div_w[iface.l] -= pf.fw;
  }
  for (int i = 0; i < c.grid.num_cells(); ++i)
    CHECK(sys.h[i] == doctest::Approx(div_w[i]).epsilon(1e-12));
}

TEST_CASE("two-cell coupled residual matches a hand-assembled oracle") {
  // One horizontal interface, injector in cell 0, producer in cell 1.
  const Grid grid =
      build_cartesian_grid(2, 1, 1.0, 1.0, Orientation::Horizontal, 0.0, 1.0);
  RockProps rock;
  rock.porosity = {0.25, 0.2};
  rock.permeability = {2e-13, 4e-13};
  WellSet wells;
  const double rate = 3e-7;
  wells.injectors.push_back({0, rate});
  wells.producers.push_back({1, rate});
  const Assembler assembler(grid, rock, kSegFluid, wells);

  State prev;
  prev.p = {1e7, 1e7};
  prev.s = {0.3, 0.6};
  State x;
  x.p = {1.002e7, 1e7};
  x.s = {0.45, 0.55};
  const double dt = 2.0 * units::day;

  SplitSystem sys;
  assembler.assemble_coupled(x, prev, dt, FluxScheme::PPU, sys);

  // Oracle: every term written out from the definitions.
  const double v = 1.0;
  const double t0 = 2e-13 * 1.0 / 0.5, t1 = 4e-13 * 1.0 / 0.5;
  const double trans = t0 * t1 / (t0 + t1);
  const double dp = x.p[0] - x.p[1]; // no gravity
  // upwind cell 0 for both phases (dp > 0)
  const double lam_w = (0.45 * 0.45) / kSegFluid.mu_w;
  const double lam_nw = (0.55 * 0.55) / kSegFluid.mu_nw;
  const double fw = trans * lam_w * kSegFluid.rho_w * dp;
  const double fnw = trans * lam_nw * kSegFluid.rho_nw * dp;

  const double acc_w0 = v * 0.25 * kSegFluid.rho_w * (0.45 - 0.3) / dt;
  const double acc_nw0 = v * 0.25 * kSegFluid.rho_nw * (0.55 - 0.7) / dt;
  const double acc_w1 = v * 0.2 * kSegFluid.rho_w * (0.55 - 0.6) / dt;
  const double acc_nw1 = v * 0.2 * kSegFluid.rho_nw * (0.45 - 0.4) / dt;

  const double lam_w1 = (0.55 * 0.55) / kSegFluid.mu_w;
  const double lam_nw1 = (0.45 * 0.45) / kSegFluid.mu_nw;
  const double fw_frac = lam_w1 / (lam_w1 + lam_nw1);
  const double qw1 = -kSegFluid.rho_w * fw_frac * rate;
  const double qnw1 = -kSegFluid.rho_nw * (1.0 - fw_frac) * rate;

  const double rw0 = acc_w0 + fw - kSegFluid.rho_w * rate;
  const double rnw0 = acc_nw0 + fnw;
  const double rw1 = acc_w1 - fw - qw1;
  const double rnw1 = acc_nw1 - fnw - qnw1;

  CHECK(sys.h[0] == doctest::Approx(rw0).epsilon(1e-12));
  CHECK(sys.h[1] == doctest::Approx(rw1).epsilon(1e-12));
  CHECK(sys.g[0] == doctest::Approx(rw0 + rnw0).epsilon(1e-12));
  CHECK(sys.g[1] == doctest::Approx(rw1 + rnw1).epsilon(1e-12));
}

TEST_CASE("pressure row is identically the phase sum") {
  const Case c = make_case(true, true, 21u);
  const Assembler assembler(c.grid, c.rock, kSegFluid, c.wells);
  const State x = random_state(c.grid.num_cells(), 5);
  const State prev = random_state(c.grid.num_cells(), 6);
  SplitSystem sys;
  for (FluxScheme scheme : {FluxScheme::PPU, FluxScheme::IHU}) {
    assembler.assemble_coupled(x, prev, 1e5, scheme, sys);
    for (int i = 0; i < c.grid.num_cells(); ++i) {
      const double r_nw = sys.g[i] - sys.h[i];
      const double scale = std::max({std::abs(sys.g[i]), std::abs(sys.h[i]), 1e-300});
      CHECK(std::abs((r_nw + sys.h[i]) - sys.g[i]) / scale <= 1e-15);
    }
  }
}

TEST_CASE("discrete conservation: interior fluxes cancel in the residual sum") {
  const Case c = make_case(true, false, 30u);
  const Assembler assembler(c.grid, c.rock, kSegFluid, {});
  const State x = random_state(c.grid.num_cells(), 8);
  const State prev = random_state(c.grid.num_cells(), 9);
  const double dt = 1e5;
  SplitSystem sys;
  for (FluxScheme scheme : {FluxScheme::PPU, FluxScheme::IHU}) {
    assembler.assemble_coupled(x, prev, dt, scheme, sys);
    double sum_w = 0.0, acc_w = 0.0, sum_nw = 0.0, acc_nw = 0.0;
    for (int i = 0; i < c.grid.num_cells(); ++i) {
      sum_w += sys.h[i];
      sum_nw += sys.g[i] - sys.h[i];
      const double vphi = assembler.pore_volume(i);
      acc_w += vphi * kSegFluid.rho_w * (x.s[i] - prev.s[i]) / dt;
      acc_nw -= vphi * kSegFluid.rho_nw * (x.s[i] - prev.s[i]) / dt;
    }
    const double scale_w = std::max(std::abs(acc_w), 1e-300);
    const double scale_nw = std::max(std::abs(acc_nw), 1e-300);
    CHECK(std::abs(sum_w - acc_w) / scale_w < 1e-12);
    CHECK(std::abs(sum_nw - acc_nw) / scale_nw < 1e-12);
  }
}

TEST_CASE("IHU and PPU assemble identical systems in co-current gravity-free flow") {
  const Case c = make_case(false, false, 40u);
  const Assembler assembler(c.grid, c.rock, kSegFluid, {});
  const int m = c.grid.num_cells();
  State x = random_state(m, 60);
  // monotone pressure field: co-current everywhere
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) x.p[c.grid.cell(i, j)] = 1e7 - 1e4 * (i + 4 * j);
  const State prev = random_state(m, 61);
  SplitSystem a, b;
  assembler.assemble_coupled(x, prev, 1e5, FluxScheme::PPU, a);
  assembler.assemble_coupled(x, prev, 1e5, FluxScheme::IHU, b);
  for (int i = 0; i < m; ++i) {
    CHECK(a.g[i] == doctest::Approx(b.g[i]).epsilon(1e-12));
    CHECK(a.h[i] == doctest::Approx(b.h[i]).epsilon(1e-12));
  }
}

TEST_CASE("assembly rejects invalid inputs") {
  const Case c = make_case(false, false, 50u);
  const Assembler assembler(c.grid, c.rock, kSegFluid, {});
  const State x = random_state(c.grid.num_cells(), 1);
  SplitSystem sys;
  CHECK_THROWS_AS(assembler.assemble_coupled(x, x, 0.0, FluxScheme::PPU, sys),
                  ConfigError);
  CHECK_THROWS_AS(assembler.assemble_coupled(x, x, -1.0, FluxScheme::PPU, sys),
                  ConfigError);
  CHECK_THROWS_AS(assembler.assemble_transport_fixed_ut(x, x, 1.0, {1.0}, sys),
                  ConfigError);
}
