#pragma once

#include "core/units.hpp"

namespace pmflow {

/// Incompressible two-phase fluid system: constant densities and viscosities.
struct FluidProps {
  double rho_w = 0.0;  // kg/m^3
  double rho_nw = 0.0; // kg/m^3
  double mu_w = 0.0;   // Pa.s
  double mu_nw = 0.0;  // Pa.s
};

void validate_fluid(const FluidProps& fluid);

/// Quadratic Corey relative permeabilities with zero residual saturations and
/// unit endpoints. Saturations outside [0, 1] are clamped; derivatives are
/// one-sided at the clamp.
struct RelPermEval {
  double krw = 0.0;
  double krnw = 0.0;
  double dkrw_ds = 0.0;
  double dkrnw_ds = 0.0;
};
RelPermEval corey_relperm(double s);

/// Phase mobilities lambda = kr / mu and their saturation derivatives.
struct MobilityEval {
  double lambda_w = 0.0;
  double lambda_nw = 0.0;
  double dlambda_w_ds = 0.0;
  double dlambda_nw_ds = 0.0;

  double total() const { return lambda_w + lambda_nw; }
  double dtotal_ds() const { return dlambda_w_ds + dlambda_nw_ds; }
};
MobilityEval mobilities(double s, const FluidProps& fluid);

} // namespace pmflow
