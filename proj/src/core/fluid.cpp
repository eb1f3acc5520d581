#include "core/fluid.hpp"

#include <algorithm>

namespace pmflow {

void validate_fluid(const FluidProps& fluid) {
  if (!(fluid.rho_w > 0.0) || !(fluid.rho_nw > 0.0) || !(fluid.mu_w > 0.0) ||
      !(fluid.mu_nw > 0.0))
    throw ConfigError("fluid densities and viscosities must be positive");
}

RelPermEval corey_relperm(double s) {
  const double sc = std::clamp(s, 0.0, 1.0);
  RelPermEval r;
  r.krw = sc * sc;
  r.krnw = (1.0 - sc) * (1.0 - sc);
  r.dkrw_ds = 2.0 * sc;
  r.dkrnw_ds = -2.0 * (1.0 - sc);
  return r;
}

MobilityEval mobilities(double s, const FluidProps& fluid) {
  const RelPermEval kr = corey_relperm(s);
  MobilityEval m;
  m.lambda_w = kr.krw / fluid.mu_w;
  m.lambda_nw = kr.krnw / fluid.mu_nw;
  m.dlambda_w_ds = kr.dkrw_ds / fluid.mu_w;
  m.dlambda_nw_ds = kr.dkrnw_ds / fluid.mu_nw;
  return m;
}

} // namespace pmflow
