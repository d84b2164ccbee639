#include "bgibbs/laplace.hpp"

#include <cmath>
#include <limits>

#include "bgibbs/errors.hpp"

namespace bgibbs {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;

void require_laplace_preconditions(const PosteriorSpec& spec) {
  if (!spec.loss.passes_condition_iii()) {
    throw ConditionError(
        "Laplace approximations require a loss satisfying condition (iii)");
  }
  if (spec.n < 1) throw DomainError("Laplace approximations need n >= 1");
  if (!(spec.theta_bar > 0.0 && spec.theta_bar < 1.0)) {
    throw DomainError("Laplace approximations need interior theta_bar");
  }
  const double p = spec.prior.density(spec.theta_bar);
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw ConditionError(
        "prior density must be positive and finite at theta_bar");
  }
}

double logsumexp2(double a, double b) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a == -inf) return b;
  if (b == -inf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

double approx_log_norm_const(const PosteriorSpec& spec) {
  require_laplace_preconditions(spec);
  const double d2 = divergence_second_deriv(spec.loss, spec.theta_bar);
  return 0.5 * std::log(kTwoPi) + spec.prior.log_density(spec.theta_bar) -
         0.5 * std::log(static_cast<double>(spec.n) * d2);
}

double approx_variance(const PosteriorSpec& spec) {
  require_laplace_preconditions(spec);
  const double d2 = divergence_second_deriv(spec.loss, spec.theta_bar);
  return 1.0 / (static_cast<double>(spec.n) * d2);
}

double approx_second_moment(const PosteriorSpec& spec) {
  return spec.theta_bar * spec.theta_bar + approx_variance(spec);
}

double approx_log_tail(const PosteriorSpec& spec, double b, TailSide side) {
  require_laplace_preconditions(spec);
  if (!(b > 0.0 && b < 1.0)) throw DomainError("b must lie in (0,1)");
  if (side == TailSide::Right && !(b > spec.theta_bar)) {
    throw DomainError("right tail needs b > theta_bar");
  }
  if (side == TailSide::Left && !(b < spec.theta_bar)) {
    throw DomainError("left tail needs b < theta_bar");
  }
  const double dp = divergence_deriv(spec.loss, b, spec.theta_bar);
  // d is increasing beyond theta_bar and decreasing before it, so dp has the
  // sign of the side; |dp| is the decay rate entering both formulas.
  const double n = static_cast<double>(spec.n);
  return -n * divergence(spec.loss, b, spec.theta_bar) - std::log(n) +
         spec.prior.log_density(b) - std::log(std::abs(dp));
}

double approx_log_tail_mass(const PosteriorSpec& spec, double theta0,
                            double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(theta0 - eps > 0.0 && theta0 + eps < 1.0)) {
    throw DomainError("the eps-interval around theta0 must stay inside (0,1)");
  }
  const double left = approx_log_tail(spec, theta0 - eps, TailSide::Left);
  const double right = approx_log_tail(spec, theta0 + eps, TailSide::Right);
  return logsumexp2(left, right) - approx_log_norm_const(spec);
}

std::vector<LaplaceEstimate> laplace_estimates(const PosteriorSpec& spec,
                                               double theta0, double eps) {
  std::vector<LaplaceEstimate> out;
  out.push_back({LaplaceKind::NormConst, approx_log_norm_const(spec)});
  out.push_back({LaplaceKind::Variance, std::log(approx_variance(spec))});
  out.push_back(
      {LaplaceKind::SecondMoment, std::log(approx_second_moment(spec))});
  out.push_back({LaplaceKind::LeftTail,
                 approx_log_tail(spec, theta0 - eps, TailSide::Left)});
  out.push_back({LaplaceKind::RightTail,
                 approx_log_tail(spec, theta0 + eps, TailSide::Right)});
  out.push_back(
      {LaplaceKind::TailMass, approx_log_tail_mass(spec, theta0, eps)});
  return out;
}

}  // namespace bgibbs
