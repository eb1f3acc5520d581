#pragma once

#include <cmath>
#include <vector>

#include "core/assembly.hpp"
#include "core/units.hpp"

namespace pmflow {

/// l2-norm of the elementwise-normalized residual: sqrt(sum_i (r_i / m_i)^2).
inline double normalized_residual_norm(const std::vector<double>& residual,
                                       const std::vector<double>& normalizer) {
  if (residual.size() != normalizer.size())
    throw ConfigError("residual and normalizer sizes differ");
  double sum = 0.0;
  for (size_t i = 0; i < residual.size(); ++i) {
    if (normalizer[i] == 0.0) throw ConfigError("zero normalizer entry");
    const double v = residual[i] / normalizer[i];
    sum += v * v;
  }
  return std::sqrt(sum);
}

/// Residual normalizers m_l = rho_l^n V phi (kg per cell) evaluated at the
/// previous converged time step. Residual rows carry kg/s, so the convergence
/// norms scale them by the step size to obtain the dimensionless relative
/// mass imbalance accumulated over the step.
class ConvergenceNorms {
public:
  ConvergenceNorms() = default;
  ConvergenceNorms(const Assembler& a) {
    const int m = a.grid().num_cells();
    m_w_.resize(m);
    m_nw_.resize(m);
    m_sum_.resize(m);
    m_vol_.resize(m);
    for (int c = 0; c < m; ++c) {
      const double vphi = a.pore_volume(c);
      m_w_[c] = a.fluid().rho_w * vphi;
      m_nw_[c] = a.fluid().rho_nw * vphi;
      m_sum_[c] = m_w_[c] + m_nw_[c];
      m_vol_[c] = vphi;
    }
  }

  /// Coupled check: max over phases of ||dt r_l / m_l||_2 with r_w = h,
  /// r_nw = g - h.
  double full_norm(const std::vector<double>& g, const std::vector<double>& h,
                   double dt) const {
    double sw = 0.0, snw = 0.0;
    for (size_t c = 0; c < g.size(); ++c) {
      const double rw = dt * h[c] / m_w_[c];
      const double rnw = dt * (g[c] - h[c]) / m_nw_[c];
      sw += rw * rw;
      snw += rnw * rnw;
    }
    return std::sqrt(std::max(sw, snw));
  }

  /// Pressure check on the phase-sum residual g, normalized by m_nw + m_w.
  double pressure_norm(const std::vector<double>& g, double dt) const {
    double sum = 0.0;
    for (size_t c = 0; c < g.size(); ++c) {
      const double v = dt * g[c] / m_sum_[c];
      sum += v * v;
    }
    return std::sqrt(sum);
  }

  /// Transport check on h = r_w, normalized by m_w.
  double transport_norm(const std::vector<double>& h, double dt) const {
    double sum = 0.0;
    for (size_t c = 0; c < h.size(); ++c) {
      const double v = dt * h[c] / m_w_[c];
      sum += v * v;
    }
    return std::sqrt(sum);
  }

  /// Norm of a volumetric (m^3/s) residual row, normalized by pore volume.
  double volumetric_norm(const std::vector<double>& gv, double dt) const {
    double sum = 0.0;
    for (size_t c = 0; c < gv.size(); ++c) {
      const double v = dt * gv[c] / m_vol_[c];
      sum += v * v;
    }
    return std::sqrt(sum);
  }

  const std::vector<double>& m_w() const { return m_w_; }
  const std::vector<double>& m_nw() const { return m_nw_; }

private:
  std::vector<double> m_w_, m_nw_, m_sum_, m_vol_;
};

/// Unnormalized 2-norm of the stacked phase residual [r_nw; r_w].
inline double raw_phase_residual_norm(const std::vector<double>& g,
                                      const std::vector<double>& h) {
  double sum = 0.0;
  for (size_t c = 0; c < g.size(); ++c) {
    const double rnw = g[c] - h[c];
    sum += rnw * rnw + h[c] * h[c];
  }
  return std::sqrt(sum);
}

} // namespace pmflow
