#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bgibbs/loss.hpp"
#include "bgibbs/prior.hpp"
#include "bgibbs/quadrature.hpp"

namespace bgibbs {

// The triple (loss, prior, data summary) that determines the generalized
// posterior with density proportional to exp(-n d(t, theta_bar)) p(t).
// n = 0 reduces every operation exactly to the prior.
struct PosteriorSpec {
  Loss loss;
  Prior prior;
  long n = 0;
  double theta_bar = 0.0;  // empirical mean, in [0,1]
};

// Builds the spec from a 0/1 sample; empty input gives n = 0, theta_bar = 0.
// Throws ValueError on symbols other than 0 and 1.
PosteriorSpec posterior_from_sample(Loss loss, Prior prior,
                                    const std::vector<int>& bits);

// ln of Z_n = integral exp(-n d(t, theta_bar)) p(t) dt, computed fully in log
// space. Nonpositive and nonincreasing in n for losses satisfying (iii).
double log_norm_const(const PosteriorSpec& spec, const QuadratureConfig& q = {});

// Callable log-density of the posterior with the normalizer computed once at
// construction. Safe to share across threads.
class PosteriorDensity {
 public:
  explicit PosteriorDensity(PosteriorSpec spec, QuadratureConfig q = {});
  double operator()(double t) const;
  double operator()(double t, double omt) const;
  double log_norm() const { return log_norm_; }
  const PosteriorSpec& spec() const { return spec_; }

 private:
  PosteriorSpec spec_;
  QuadratureConfig q_;
  double log_norm_ = 0.0;
  double f_tb_ = 0.0, f_omtb_ = 0.0;  // f(theta_bar), f(1-theta_bar)
};

// log posterior density at t: -n d(t,theta_bar) + log p(t) - ln Z_n.
double log_density(const PosteriorSpec& spec, double t,
                   const QuadratureConfig& q = {});

// Posterior mass of (a,b) ∩ (0,1); the log variant stays finite for tail
// masses far below the smallest positive double.
double interval_mass(const PosteriorSpec& spec, double a, double b,
                     const QuadratureConfig& q = {});
double log_interval_mass(const PosteriorSpec& spec, double a, double b,
                         const QuadratureConfig& q = {});

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double second_moment = 0.0;
};

// Posterior mean/variance/second moment; central differences around
// theta_bar avoid the cancellation that E[t^2] - E[t]^2 would suffer at
// large n.
Moments moments(const PosteriorSpec& spec, const QuadratureConfig& q = {});

using LogDensityFn = std::function<double(double)>;

// D(A,B) = integral ln(dA/dB) dA for log densities on (0,1). Throws
// SupportViolationError if A is positive where B vanishes on the grid.
double kl(const LogDensityFn& log_density_a, const LogDensityFn& log_density_b,
          const QuadratureConfig& q = {},
          const std::vector<double>& t_hints = {});

// The cumulative-loss functional evaluated at a candidate belief nu:
//   n [theta_bar E_nu f(t) + (1-theta_bar) E_nu f(1-t)] + D(nu, prior),
// computed in the divergence form so that
//   gibbs_loss(nu) = kl(nu, posterior) - ln Z_n + shift,
//   shift = n [theta_bar f(theta_bar) + (1-theta_bar) f(1-theta_bar)],
// holds exactly. The posterior is the unique minimizer.
double gibbs_loss(const PosteriorSpec& spec, const LogDensityFn& nu_log_density,
                  const QuadratureConfig& q = {},
                  const std::vector<double>& t_hints = {});

// Expected cumulative loss of stubbornly believing theta1 when data come
// from theta0: n M KL(Bern(theta0), Bern(theta1)). Log-loss families only.
double gibbs_loss_pointmass(const Loss& loss, double theta1, double theta0,
                            long n);

struct BetaParams {
  double a = 1.0;
  double b = 1.0;
};

// Closed-form Bayes update for log loss with M = 1: Beta(a,b) with s
// successes in n trials becomes Beta(a+s, b+n-s).
BetaParams conjugate_oracle(const BetaParams& prior, long n, long successes);
BetaParams conjugate_oracle(const Prior& prior, long n, long successes);

}  // namespace bgibbs
