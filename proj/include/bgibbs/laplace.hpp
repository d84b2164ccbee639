#pragma once

#include <vector>

#include "bgibbs/posterior.hpp"

namespace bgibbs {

// Closed-form large-n approximations of the posterior integrals, valid for
// losses satisfying condition (iii), interior theta_bar, and a prior density
// positive and continuous there. All values are returned in log space so
// they compose with the posterior module without underflow.

enum class LaplaceKind {
  NormConst,
  Variance,
  SecondMoment,
  LeftTail,
  RightTail,
  TailMass
};

struct LaplaceEstimate {
  LaplaceKind kind = LaplaceKind::NormConst;
  double value_log = 0.0;
};

// ln Z_n ~ ln[ sqrt(2 pi) p(tb) ] - (1/2) ln[ n d''(tb,tb) ].
double approx_log_norm_const(const PosteriorSpec& spec);

// V_f ~ 1/(n d''(tb,tb)) = -(1-tb)/(n f'(tb)).
double approx_variance(const PosteriorSpec& spec);

// E_f[t^2] ~ tb^2 + 1/(n d''(tb,tb)).
double approx_second_moment(const PosteriorSpec& spec);

enum class TailSide { Left, Right };

// ln of the unnormalized tail integral estimate
//   integral_{b}^{1} p e^{-n d}  ~  p(b) e^{-n d(b,tb)} / (n d'(b))   (right)
// and the mirrored left version; b must lie strictly beyond theta_bar on the
// requested side.
double approx_log_tail(const PosteriorSpec& spec, double b, TailSide side);

// ln posterior mass of (theta0-eps, theta0+eps)^c: log-sum-exp of the two
// tail estimates minus approx_log_norm_const. Leading behavior
// -n delta(eps) - (1/2) ln n + const.
double approx_log_tail_mass(const PosteriorSpec& spec, double theta0,
                            double eps);

// All six estimates for reporting.
std::vector<LaplaceEstimate> laplace_estimates(const PosteriorSpec& spec,
                                               double theta0, double eps);

}  // namespace bgibbs
