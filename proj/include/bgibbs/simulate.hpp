#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgibbs/loss.hpp"
#include "bgibbs/posterior.hpp"
#include "bgibbs/prior.hpp"
#include "bgibbs/quadrature.hpp"

namespace bgibbs {

// Counter-based Bernoulli stream: bit i depends only on (seed, stream, i),
// so identical prefixes for any length and full reproducibility under any
// parallel schedule.
std::vector<std::uint8_t> gen_bernoulli(double theta0, long n,
                                        std::uint64_t seed,
                                        std::uint64_t stream = 0);

struct ExperimentConfig {
  Loss loss = Loss::log_loss();
  Prior prior = Prior::uniform();
  double theta0 = 0.5;
  std::uint64_t seed = 0;
  std::vector<long> n_schedule;       // strictly increasing
  std::vector<double> eps_list;       // intervals must stay inside (0,1)
  bool deterministic_theta_bar = false;  // use theta_bar = theta0 exactly
  int threads = 0;                    // 0 = machine parallelism
  QuadratureConfig quad;
};

struct ExperimentRow {
  long n = 0;
  double theta_bar = 0.0;
  double eps = 0.0;
  double measured = 0.0;
  double predicted = 0.0;
  double log_measured = 0.0;
  double log_predicted = 0.0;
};

struct ExperimentTable {
  std::string kind;  // consistency | rate | variance
  ExperimentConfig config;
  std::string run_id;      // hash of kind + config
  double wall_seconds = 0.0;
  std::vector<ExperimentRow> rows;  // ordered by (n, eps)
};

// Prop. 1 check: measured = posterior mass of (theta0-eps, theta0+eps);
// predicted = 1, the consistency limit. One row per (n, eps).
ExperimentTable run_consistency_experiment(const ExperimentConfig& cfg);

// Prop. 2 check: measured = posterior mass of the complement of
// (theta0-eps, theta0+eps) (log-space, underflow-free); predicted = the
// Laplace tail-mass estimate. Requires a loss satisfying (iii).
ExperimentTable run_rate_experiment(const ExperimentConfig& cfg);

// Prop. 3 check: measured = n * posterior variance; predicted =
// -theta0(1-theta0) / (theta0 f'(theta0)). Requires (iii); eps unused.
ExperimentTable run_variance_experiment(const ExperimentConfig& cfg);

struct RateFit {
  double delta_hat = 0.0;       // decay rate, -1/2 ln n term held fixed
  double half_log_slope = 0.0;  // free ln n coefficient (diagnostic fit)
  double intercept = 0.0;
  double residual = 0.0;        // rms residual of the constrained fit
};

// Least-squares fit of ln m_n = C - (1/2) ln n - delta n to a single-eps rate
// table, plus a diagnostic fit with the ln n coefficient free. Uses the
// upper half of the schedule by default (the asymptotic regime). Throws
// FitError with fewer than 4 usable rows or a singular design, ValueError on
// mixed-eps tables.
RateFit fit_rate(const ExperimentTable& table, bool upper_half_only = true);

// CSV with header n,theta_bar,eps,measured,predicted,log_measured,
// log_predicted,ratio; floats at 17 significant digits. Stable bytes for a
// given config regardless of thread count.
std::string to_csv(const ExperimentTable& table);

}  // namespace bgibbs
