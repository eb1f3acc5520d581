#include "core/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmflow {

FluxScheme scheme_of(SolverKind kind) {
  switch (kind) {
    case SolverKind::SfiUt:
    case SolverKind::FsmsnUt:
      return FluxScheme::IHU;
    default:
      return FluxScheme::PPU;
  }
}

const char* solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::Newton: return "newton";
    case SolverKind::SfiUt: return "sfi_ut";
    case SolverKind::FsmsnP: return "fsmsn_p";
    case SolverKind::FsmsnUt: return "fsmsn_ut";
    case SolverKind::MspinP: return "mspin_p";
  }
  return "?";
}

double damping_factor(const std::vector<double>& delta_s) {
  double mx = 0.0;
  for (double d : delta_s) mx = std::max(mx, std::abs(d));
  return mx <= 0.2 ? 1.0 : 0.2 / mx;
}

namespace {

constexpr double kStallImprovement = 0.999; // < 0.1% gain counts as flat
constexpr double kStallBand = 1.2;          // flat means near the best norm

double max_abs_diag(const SparseMatrix& a) {
  double mx = 0.0;
  for (int r = 0; r < a.rows; ++r) {
    const int slot = a.find(r, r);
    if (slot >= 0) mx = std::max(mx, std::abs(a.values[slot]));
  }
  return mx;
}

// y = values(pattern) * x, for block values stored against a shared pattern.
void pattern_matvec(const SparseMatrix& pattern, const std::vector<double>& values,
                    const std::vector<double>& x, std::vector<double>& y) {
  y.assign(pattern.rows, 0.0);
  for (int r = 0; r < pattern.rows; ++r) {
    double sum = 0.0;
    for (int s = pattern.row_offsets[r]; s < pattern.row_offsets[r + 1]; ++s)
      sum += values[s] * x[pattern.col_indices[s]];
    y[r] = sum;
  }
}

} // namespace

struct TimeStepSolver::OuterLinearization {
  bool valid = false;
  std::vector<double> g, h, p, s;
  std::vector<double> app, aps, asp, ass;
  double raw_norm = 0.0;

  void capture(const SplitSystem& sys, const State& x) {
    g = sys.g;
    h = sys.h;
    p = x.p;
    s = x.s;
    app = sys.app.values;
    aps = sys.aps.values;
    asp = sys.asp.values;
    ass = sys.ass.values;
    raw_norm = raw_phase_residual_norm(sys.g, sys.h);
    valid = true;
  }

  ForcingData forcing(const SplitSystem& cur_sys, const State& cur_x) const {
    ForcingData f;
    if (!valid) return f;
    f.res_cur = raw_phase_residual_norm(cur_sys.g, cur_sys.h);
    f.res_prev = raw_norm;

    const int m = static_cast<int>(g.size());
    std::vector<double> dp(m), ds(m);
    for (int c = 0; c < m; ++c) {
      dp[c] = cur_x.p[c] - p[c];
      ds[c] = cur_x.s[c] - s[c];
    }
    std::vector<double> t1, t2, gm(m), hm(m);
    pattern_matvec(cur_sys.app, app, dp, t1);
    pattern_matvec(cur_sys.aps, aps, ds, t2);
    for (int c = 0; c < m; ++c) gm[c] = g[c] + t1[c] + t2[c];
    pattern_matvec(cur_sys.asp, asp, dp, t1);
    pattern_matvec(cur_sys.ass, ass, ds, t2);
    for (int c = 0; c < m; ++c) hm[c] = h[c] + t1[c] + t2[c];
    f.model_prev = raw_phase_residual_norm(gm, hm);
    return f;
  }
};

bool TimeStepSolver::coupled_solve(const SplitSystem& sys,
                                   const std::vector<double>* rhs,
                                   std::vector<double>& dp,
                                   std::vector<double>& ds) const {
  const int m = static_cast<int>(sys.g.size());
  SparseMatrix j = block_assemble(sys.blocks());

  // The constant-pressure direction is a nullspace of every assembled system
  // (incompressible closed domain, rate-controlled wells); anchor it at cell 0.
  double anchor = max_abs_diag(sys.app);
  if (anchor == 0.0) anchor = 1.0;
  j.values[j.find(0, 0)] += anchor;

  std::vector<double> b(2 * m);
  if (rhs != nullptr) {
    b = *rhs;
  } else {
    for (int c = 0; c < m; ++c) {
      b[c] = -sys.g[c];
      b[m + c] = -sys.h[c];
    }
  }
  const auto x = lu_solve(j, b);
  if (!x) return false;
  dp.assign(x->begin(), x->begin() + m);
  ds.assign(x->begin() + m, x->end());
  return true;
}

int TimeStepSolver::inner_pressure_solve(FluxScheme scheme, const State& prev,
                                         double dt, double eps_p, State& x,
                                         SplitSystem& work) const {
  const int m = x.size();
  const double inv_rho_nw = 1.0 / asm_->fluid().rho_nw;
  const double mix = 1.0 / asm_->fluid().rho_w - inv_rho_nw;

  std::vector<double> gv(m);
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int it = 0;; ++it) {
    asm_->assemble_coupled(x, prev, dt, scheme, work);
    // Volumetric combination of the rows: consistent for an incompressible
    // closed system even when the phase-sum rows are not.
    for (int c = 0; c < m; ++c) gv[c] = inv_rho_nw * work.g[c] + mix * work.h[c];
    const double mass_norm = norms_.pressure_norm(work.g, dt);
    const double vol_norm = norms_.volumetric_norm(gv, dt);
    if (mass_norm < eps_p || vol_norm < eps_p) return it;
    if (vol_norm >= kStallImprovement * best && vol_norm <= kStallBand * best) {
      if (++stall >= 2) return it; // the subproblem cannot improve further
    } else {
      stall = 0;
    }
    best = std::min(best, vol_norm);
    if (it >= controls_.max_inner) return -1;

    // A_v = App / rho_nw + mix * Asp, then anchor the pressure level.
    SparseMatrix av = work.app;
    for (size_t s = 0; s < av.values.size(); ++s)
      av.values[s] = inv_rho_nw * work.app.values[s] + mix * work.asp.values[s];
    double anchor = max_abs_diag(av);
    if (anchor == 0.0) anchor = 1.0;
    av.values[av.find(0, 0)] += anchor;

    std::vector<double> b(m);
    for (int c = 0; c < m; ++c) b[c] = -gv[c];
    const auto dp = lu_solve(av, b);
    if (!dp) return -1;
    for (int c = 0; c < m; ++c) x.p[c] += (*dp)[c];
  }
}

int TimeStepSolver::inner_transport_solve(TransportVariant variant, const State& prev,
                                          double dt, double eps_s,
                                          const std::vector<double>* frozen_ut,
                                          State& x, SplitSystem& work,
                                          double* max_ds) const {
  if (variant == TransportVariant::FixedTotalVelocityIHU && frozen_ut == nullptr)
    throw ConfigError("transport with fixed total velocity requires a frozen u_T");

  const int m = x.size();
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int it = 0;; ++it) {
    if (variant == TransportVariant::FixedPressurePPU)
      asm_->assemble_transport_fixed_pressure(x, prev, dt, work);
    else
      asm_->assemble_transport_fixed_ut(x, prev, dt, *frozen_ut, work);
    const double tn = norms_.transport_norm(work.h, dt);
    if (tn < eps_s) return it;
    if (tn >= kStallImprovement * best && tn <= kStallBand * best) {
      if (++stall >= 2) return it; // flat at its floor
    } else {
      stall = 0;
    }
    best = std::min(best, tn);
    if (it >= controls_.max_inner) return -1;

    std::vector<double> b(m);
    for (int c = 0; c < m; ++c) b[c] = -work.h[c];
    const auto ds = lu_solve(work.ass, b);
    if (!ds) return -1;
    const double tau = damping_factor(*ds);
    for (int c = 0; c < m; ++c) {
      x.s[c] += tau * (*ds)[c];
      if (max_ds != nullptr)
        *max_ds = std::max(*max_ds, std::abs(tau * (*ds)[c]));
    }
  }
}

SolverReport TimeStepSolver::newton_fim(const State& prev, double dt,
                                        State& next) const {
  State x = prev;
  SplitSystem sys;
  SolverReport report;
  std::vector<double> dp, ds;
  for (int k = 0;; ++k) {
    asm_->assemble_coupled(x, prev, dt, FluxScheme::PPU, sys);
    const double norm = norms_.full_norm(sys.g, sys.h, dt);
    report.residual_history.push_back(norm);
    if (norm < controls_.outer_tol) {
      report.converged = true;
      report.outer_iterations = k;
      break;
    }
    if (k >= controls_.max_outer || !coupled_solve(sys, nullptr, dp, ds)) {
      report.outer_iterations = k;
      break;
    }
    const double tau = damping_factor(ds);
    for (int c = 0; c < x.size(); ++c) {
      x.p[c] += dp[c];
      x.s[c] += tau * ds[c];
      report.max_applied_ds = std::max(report.max_applied_ds, std::abs(tau * ds[c]));
    }
    report.outer_iterations = k + 1;
  }
  next = std::move(x);
  return report;
}

SolverReport TimeStepSolver::sfi_ut(ToleranceStrategy strategy, const State& prev,
                                    double dt, State& next) const {
  State x = prev;
  SplitSystem sys, work;
  SolverReport report;
  OuterLinearization lin;
  strategy.reset();
  const bool track_a3 = strategy.kind() == ToleranceKind::A3;
  for (int k = 0;; ++k) {
    asm_->assemble_coupled(x, prev, dt, FluxScheme::IHU, sys);
    const double norm = norms_.full_norm(sys.g, sys.h, dt);
    report.residual_history.push_back(norm);
    if (norm < controls_.outer_tol) {
      report.converged = true;
      report.outer_iterations = k;
      break;
    }
    if (k >= controls_.max_outer) {
      report.outer_iterations = k;
      break;
    }
    const auto [eps_p, eps_s] =
        strategy.begin_outer(k, track_a3 ? lin.forcing(sys, x) : ForcingData{});
    if (track_a3) lin.capture(sys, x);

    const int np = inner_pressure_solve(FluxScheme::IHU, prev, dt, eps_p, x, work);
    if (np < 0) {
      report.outer_iterations = k;
      break;
    }
    report.pressure_iterations += np;

    const std::vector<double> ut = asm_->total_velocity(x);
    const int ns = inner_transport_solve(TransportVariant::FixedTotalVelocityIHU,
                                         prev, dt, eps_s, &ut, x, work,
                                         &report.max_applied_ds);
    if (ns < 0) {
      report.outer_iterations = k;
      break;
    }
    report.transport_iterations += ns;
    report.outer_iterations = k + 1;
  }
  next = std::move(x);
  return report;
}

SolverReport TimeStepSolver::fsmsn(bool fixed_ut_variant, ToleranceStrategy strategy,
                                   const State& prev, double dt, State& next) const {
  const FluxScheme scheme = fixed_ut_variant ? FluxScheme::IHU : FluxScheme::PPU;
  State x = prev;
  SplitSystem sys, work;
  SolverReport report;
  OuterLinearization lin;
  strategy.reset();
  const bool track_a3 = strategy.kind() == ToleranceKind::A3;
  std::vector<double> dp, ds;
  for (int k = 0;; ++k) {
    asm_->assemble_coupled(x, prev, dt, scheme, sys);
    const double norm = norms_.full_norm(sys.g, sys.h, dt);
    report.residual_history.push_back(norm);
    if (norm < controls_.outer_tol) {
      report.converged = true;
      report.outer_iterations = k;
      break;
    }
    if (k >= controls_.max_outer) {
      report.outer_iterations = k;
      break;
    }
    const auto [eps_p, eps_s] =
        strategy.begin_outer(k, track_a3 ? lin.forcing(sys, x) : ForcingData{});
    if (track_a3) lin.capture(sys, x);

    // Preconditioning step: sequential pressure and transport solves.
    const int np = inner_pressure_solve(scheme, prev, dt, eps_p, x, work);
    if (np < 0) {
      report.outer_iterations = k;
      break;
    }
    report.pressure_iterations += np;

    int ns;
    if (fixed_ut_variant) {
      const std::vector<double> ut = asm_->total_velocity(x);
      ns = inner_transport_solve(TransportVariant::FixedTotalVelocityIHU, prev, dt,
                                 eps_s, &ut, x, work, &report.max_applied_ds);
    } else {
      ns = inner_transport_solve(TransportVariant::FixedPressurePPU, prev, dt,
                                 eps_s, nullptr, x, work, &report.max_applied_ds);
    }
    if (ns < 0) {
      report.outer_iterations = k;
      break;
    }
    report.transport_iterations += ns;

    // Global step: Newton update linearized at the preconditioned state.
    asm_->assemble_coupled(x, prev, dt, scheme, sys);
    if (!coupled_solve(sys, nullptr, dp, ds)) {
      report.outer_iterations = k;
      break;
    }
    const double tau = damping_factor(ds);
    for (int c = 0; c < x.size(); ++c) {
      x.p[c] += dp[c];
      x.s[c] += tau * ds[c];
      report.max_applied_ds = std::max(report.max_applied_ds, std::abs(tau * ds[c]));
    }
    report.outer_iterations = k + 1;
  }
  next = std::move(x);
  return report;
}

SolverReport TimeStepSolver::mspin(ToleranceStrategy strategy, const State& prev,
                                   double dt, State& next) const {
  State x = prev;
  SplitSystem sys, bsys, work;
  SolverReport report;
  OuterLinearization lin;
  strategy.reset();
  const bool track_a3 = strategy.kind() == ToleranceKind::A3;
  const int m = x.size();
  std::vector<double> delta1(m), delta2(m), v1, v2, rhs(2 * m), dp, ds;
  for (int k = 0;; ++k) {
    asm_->assemble_coupled(x, prev, dt, FluxScheme::PPU, sys);
    const double norm = norms_.full_norm(sys.g, sys.h, dt);
    report.residual_history.push_back(norm);
    if (norm < controls_.outer_tol) {
      report.converged = true;
      report.outer_iterations = k;
      break;
    }
    if (k >= controls_.max_outer) {
      report.outer_iterations = k;
      break;
    }
    const auto [eps_p, eps_s] =
        strategy.begin_outer(k, track_a3 ? lin.forcing(sys, x) : ForcingData{});
    if (track_a3) lin.capture(sys, x);

    const std::vector<double> p_old = x.p;
    const std::vector<double> s_old = x.s;

    // Pressure step, then save the blocks at (p*, s^k).
    const int np = inner_pressure_solve(FluxScheme::PPU, prev, dt, eps_p, x, work);
    if (np < 0) {
      report.outer_iterations = k;
      break;
    }
    report.pressure_iterations += np;
    asm_->assemble_coupled(x, prev, dt, FluxScheme::PPU, bsys);
    for (int c = 0; c < m; ++c) delta1[c] = x.p[c] - p_old[c];

    // Transport step at fixed p*.
    const int ns = inner_transport_solve(TransportVariant::FixedPressurePPU, prev,
                                         dt, eps_s, nullptr, x, work,
                                         &report.max_applied_ds);
    if (ns < 0) {
      report.outer_iterations = k;
      break;
    }
    report.transport_iterations += ns;
    for (int c = 0; c < m; ++c) delta2[c] = x.s[c] - s_old[c];

    // Global step: solve curly-J dx = -F with curly-J ~ -L^{-1} J(p*, s^k),
    // i.e. J dx = L F with L the lower block triangle of the saved blocks.
    lower_block_matvec(bsys.app, bsys.asp, bsys.ass, delta1, delta2, v1, v2);
    for (int c = 0; c < m; ++c) {
      rhs[c] = v1[c];
      rhs[m + c] = v2[c];
    }
    if (!coupled_solve(bsys, &rhs, dp, ds)) {
      report.outer_iterations = k;
      break;
    }
    const double tau = damping_factor(ds);
    for (int c = 0; c < m; ++c) {
      x.p[c] = p_old[c] + dp[c];
      x.s[c] = s_old[c] + tau * ds[c];
      report.max_applied_ds = std::max(report.max_applied_ds, std::abs(tau * ds[c]));
    }
    report.outer_iterations = k + 1;
  }
  next = std::move(x);
  return report;
}

SolverReport TimeStepSolver::solve(SolverKind kind, ToleranceStrategy strategy,
                                   const State& prev, double dt, State& next) const {
  switch (kind) {
    case SolverKind::Newton: return newton_fim(prev, dt, next);
    case SolverKind::SfiUt: return sfi_ut(strategy, prev, dt, next);
    case SolverKind::FsmsnP: return fsmsn(false, strategy, prev, dt, next);
    case SolverKind::FsmsnUt: return fsmsn(true, strategy, prev, dt, next);
    case SolverKind::MspinP: return mspin(strategy, prev, dt, next);
  }
  throw ConfigError("unknown solver");
}

} // namespace pmflow
