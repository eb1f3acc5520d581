#pragma once

#include <algorithm>
#include <cmath>

namespace pmflow {

/// Subproblem-tolerance selection for the preconditioning step.
enum class ToleranceKind { Fixed, A1, A2, A3 };

/// Data the A3 forcing term needs at the top of outer iteration k >= 1:
/// unnormalized 2-norms of the coupled residual at iterates k and k-1, and of
/// the Newton model r^{k-1} + J(x^{k-1}) dx^{k-1} evaluated with the update
/// actually applied at iteration k-1.
struct ForcingData {
  double res_prev = 0.0;
  double res_cur = 0.0;
  double model_prev = 0.0;
};

/// Running subproblem tolerances eps_p^k, eps_s^k. Fixed uses a constant
/// value; the adaptive strategies start at eps^0 = 1 and shrink it each outer
/// iteration by the forcing term eta^k (A1: 0.1, A2: 2^-(k+1), A3: relative
/// Newton-model mismatch). A3 tolerances are clamped to [outer_tol, eps^{k-1}]
/// so a subproblem is never solved tighter than the outer goal and the
/// tolerance never loosens mid-solve.
class ToleranceStrategy {
public:
  ToleranceStrategy() = default;
  ToleranceStrategy(ToleranceKind kind, double fixed_value, double outer_tol)
      : kind_(kind), fixed_(fixed_value), outer_tol_(outer_tol) {}

  ToleranceKind kind() const { return kind_; }

  void reset() {
    eps_p_ = 1.0;
    eps_s_ = 1.0;
    prev_eps_p_ = 1.0;
    prev_eps_s_ = 1.0;
  }

  /// Tolerances for the subproblem solves of outer iteration k (k >= 0).
  /// `forcing` is only consulted by A3 and only for k >= 1.
  std::pair<double, double> begin_outer(int k, const ForcingData& forcing) {
    if (kind_ == ToleranceKind::Fixed) return {fixed_, fixed_};
    if (k == 0) return {eps_p_, eps_s_}; // eps^0 = 1

    double eta = 1.0;
    switch (kind_) {
      case ToleranceKind::A1:
        eta = 0.1;
        break;
      case ToleranceKind::A2:
        eta = std::pow(2.0, -(k + 1));
        break;
      case ToleranceKind::A3:
        eta = forcing.res_prev > 0.0
                  ? std::abs(forcing.res_cur - forcing.model_prev) / forcing.res_prev
                  : 0.0;
        break;
      default:
        break;
    }
    eps_p_ *= eta;
    eps_s_ *= eta;
    if (kind_ == ToleranceKind::A3) {
      eps_p_ = std::clamp(eps_p_, outer_tol_, prev_eps_p_);
      eps_s_ = std::clamp(eps_s_, outer_tol_, prev_eps_s_);
    }
    prev_eps_p_ = eps_p_;
    prev_eps_s_ = eps_s_;
    return {eps_p_, eps_s_};
  }

private:
  ToleranceKind kind_ = ToleranceKind::Fixed;
  double fixed_ = 1e-6;
  double outer_tol_ = 1e-8;
  double eps_p_ = 1.0, eps_s_ = 1.0;
  double prev_eps_p_ = 1.0, prev_eps_s_ = 1.0;
};

} // namespace pmflow
