#include "bgibbs/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "bgibbs/errors.hpp"

namespace bgibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_spec(const PosteriorSpec& spec) {
  if (spec.n < 0) throw ValueError("n must be nonnegative");
  if (!(spec.theta_bar >= 0.0 && spec.theta_bar <= 1.0)) {
    throw ValueError("theta_bar must lie in [0,1]");
  }
}

// d(t, theta_bar) with f(theta_bar)-side values precomputed; boundary
// theta_bar reduces to the one-sided limit of f at 1.
struct DataDivergence {
  explicit DataDivergence(const PosteriorSpec& spec)
      : loss(spec.loss), y(spec.theta_bar) {
    if (y == 0.0 || y == 1.0) {
      const auto lim = loss.limit_at_one();
      if (!lim) {
        throw EndpointExtensionError(
            "theta_bar on the boundary needs a loss with a finite limit at 1");
      }
      f_lim = *lim;
    } else {
      f_y = loss.raw_value(y);
      f_omy = loss.raw_value(1.0 - y);
    }
  }

  double operator()(double t, double omt) const {
    if (y == 1.0) return loss.raw_value(t) - f_lim;
    if (y == 0.0) return loss.raw_value(omt) - f_lim;
    return y * (loss.raw_value(t) - f_y) +
           (1.0 - y) * (loss.raw_value(omt) - f_omy);
  }

  const Loss& loss;
  double y;
  double f_y = 0.0, f_omy = 0.0, f_lim = 0.0;
};

// log of the unnormalized posterior integrand exp(-n d(t,tb)) p(t).
struct Kernel {
  explicit Kernel(const PosteriorSpec& spec) : spec(spec) {
    if (spec.n > 0) div.emplace(spec);
  }

  double operator()(double t, double omt) const {
    const double lp = spec.prior.log_density(t, omt);
    if (lp == -kInf || spec.n == 0) return lp;
    return -static_cast<double>(spec.n) * (*div)(t, omt) + lp;
  }

  std::optional<DataDivergence> div;
  const PosteriorSpec& spec;
};

// Panel hints: prior/loss knots plus a geometric cluster around theta_bar
// at the concentration scale of the integrand.
std::vector<double> kernel_hints(const PosteriorSpec& spec) {
  std::vector<double> h = spec.prior.knots();
  const auto lk = spec.loss.knots();
  h.insert(h.end(), lk.begin(), lk.end());
  const double tb = spec.theta_bar;
  if (spec.n > 0 && tb > 0.0 && tb < 1.0) {
    double d2 = 0.0;
    const auto [lo, hi] = spec.loss.domain();
    if (tb > lo && tb < hi) {
      d2 = std::max(-spec.loss.deriv(tb) / (1.0 - tb), 0.0);
    }
    const double w0 = 6.0 / std::sqrt(static_cast<double>(spec.n) * d2 + 1.0);
    h.push_back(tb);
    for (double w = 0.25 * w0; w < 1.0; w *= 2.0) {
      h.push_back(tb - w);
      h.push_back(tb + w);
    }
  }
  return h;
}

}  // namespace

PosteriorSpec posterior_from_sample(Loss loss, Prior prior,
                                    const std::vector<int>& bits) {
  long sum = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) {
      throw ValueError("sample symbols must be 0 or 1, got " +
                       std::to_string(b));
    }
    sum += b;
  }
  PosteriorSpec spec{std::move(loss), std::move(prior),
                     static_cast<long>(bits.size()), 0.0};
  if (spec.n > 0) {
    spec.theta_bar =
        static_cast<double>(sum) / static_cast<double>(spec.n);
  }
  return spec;
}

double log_norm_const(const PosteriorSpec& spec, const QuadratureConfig& q) {
  validate_spec(spec);
  if (spec.n == 0) return 0.0;  // Z_0 = integral of the prior = 1
  const Kernel k(spec);
  return log_integrate([&k](double t, double omt) { return k(t, omt); }, 0.0,
                       1.0, q, kernel_hints(spec));
}

PosteriorDensity::PosteriorDensity(PosteriorSpec spec, QuadratureConfig q)
    : spec_(std::move(spec)), q_(q) {
  validate_spec(spec_);
  log_norm_ = log_norm_const(spec_, q_);
  if (spec_.n > 0 && spec_.theta_bar > 0.0 && spec_.theta_bar < 1.0) {
    f_tb_ = spec_.loss.raw_value(spec_.theta_bar);
    f_omtb_ = spec_.loss.raw_value(1.0 - spec_.theta_bar);
  } else if (spec_.n > 0) {
    const auto lim = spec_.loss.limit_at_one();
    f_tb_ = f_omtb_ = lim ? *lim : 0.0;
  }
}

double PosteriorDensity::operator()(double t, double omt) const {
  const double lp = spec_.prior.log_density(t, omt);
  if (spec_.n == 0 || lp == -kInf) return lp;
  double d;
  if (spec_.theta_bar == 1.0) {
    d = spec_.loss.raw_value(t) - f_tb_;
  } else if (spec_.theta_bar == 0.0) {
    d = spec_.loss.raw_value(omt) - f_tb_;
  } else {
    d = spec_.theta_bar * (spec_.loss.raw_value(t) - f_tb_) +
        (1.0 - spec_.theta_bar) * (spec_.loss.raw_value(omt) - f_omtb_);
  }
  return -static_cast<double>(spec_.n) * d + lp - log_norm_;
}

double PosteriorDensity::operator()(double t) const {
  // keep the complement strictly inside (0,1) when t is extremely small
  return (*this)(t, std::min(1.0 - t, 1.0 - 1.1102230246251565e-16));
}

double log_density(const PosteriorSpec& spec, double t,
                   const QuadratureConfig& q) {
  return PosteriorDensity(spec, q)(t);
}

double log_interval_mass(const PosteriorSpec& spec, double a, double b,
                         const QuadratureConfig& q) {
  validate_spec(spec);
  if (!(a >= 0.0 && a < b && b <= 1.0)) {
    throw DomainError("interval must satisfy 0 <= a < b <= 1");
  }
  const Kernel k(spec);
  const auto hints = kernel_hints(spec);
  const double num = log_integrate(
      [&k](double t, double omt) { return k(t, omt); }, a, b, q, hints);
  if (spec.n == 0) return num;  // prior already normalized
  const double den = log_integrate(
      [&k](double t, double omt) { return k(t, omt); }, 0.0, 1.0, q, hints);
  return num - den;
}

double interval_mass(const PosteriorSpec& spec, double a, double b,
                     const QuadratureConfig& q) {
  const double lm = log_interval_mass(spec, a, b, q);
  return std::min(std::exp(lm), 1.0);
}

Moments moments(const PosteriorSpec& spec, const QuadratureConfig& q) {
  validate_spec(spec);
  const Kernel k(spec);
  const auto hints = kernel_hints(spec);
  const auto g = [&k](double t, double omt) { return k(t, omt); };
  const double m = scan_log_max(g, 0.0, 1.0, q, hints);
  if (m == -kInf) throw QuadratureError("posterior kernel is identically zero");
  const double c = spec.theta_bar;
  const double i0 = integrate_shifted(
      g, [](double, double) { return 1.0; }, 0.0, 1.0, m, q, 0.0, hints);
  if (!(i0 > 0.0)) {
    throw QuadratureError("posterior normalizer vanished numerically");
  }
  const double floor = q.rel_tol * i0;
  const double i1 = integrate_shifted(
      g, [c](double t, double) { return t - c; }, 0.0, 1.0, m, q, floor,
      hints);
  const double i2 = integrate_shifted(
      g, [c](double t, double) { return (t - c) * (t - c); }, 0.0, 1.0, m, q,
      floor, hints);
  const double m1 = i1 / i0;
  const double m2 = i2 / i0;
  Moments out;
  out.mean = c + m1;
  out.variance = std::max(m2 - m1 * m1, 0.0);
  out.second_moment = m2 + 2.0 * c * m1 + c * c;
  return out;
}

double kl(const LogDensityFn& log_density_a, const LogDensityFn& log_density_b,
          const QuadratureConfig& q, const std::vector<double>& t_hints) {
  const auto g = [&log_density_a](double t, double) {
    return log_density_a(t);
  };
  const double m = scan_log_max(g, 0.0, 1.0, q, t_hints);
  if (m == -kInf) throw ValueError("first density is identically zero");
  const double i0 = integrate_shifted(
      g, [](double, double) { return 1.0; }, 0.0, 1.0, m, q, 0.0, t_hints);
  const auto h = [&](double t, double) {
    const double la = log_density_a(t);
    const double lb = log_density_b(t);
    if (lb == -kInf && la != -kInf) {
      throw SupportViolationError(
          "first density positive where second vanishes (t = " +
          std::to_string(t) + ")");
    }
    return la - lb;
  };
  const double ih = integrate_shifted(g, h, 0.0, 1.0, m, q,
                                      q.rel_tol * std::max(i0, 1e-300),
                                      t_hints);
  return std::exp(m) * ih;
}

double gibbs_loss(const PosteriorSpec& spec, const LogDensityFn& nu_log_density,
                  const QuadratureConfig& q,
                  const std::vector<double>& t_hints) {
  validate_spec(spec);
  const auto prior_fn = [&spec](double t) { return spec.prior.log_density(t); };
  if (spec.n == 0) return kl(nu_log_density, prior_fn, q, t_hints);

  const DataDivergence div(spec);
  // data-only shift: n [tb f(tb) + (1-tb) f(1-tb)], with offsets included
  double shift;
  if (spec.theta_bar == 0.0 || spec.theta_bar == 1.0) {
    shift = static_cast<double>(spec.n) *
            (*spec.loss.limit_at_one() + spec.loss.offset());
  } else {
    shift = static_cast<double>(spec.n) *
            (spec.theta_bar * spec.loss.value(spec.theta_bar) +
             (1.0 - spec.theta_bar) * spec.loss.value(1.0 - spec.theta_bar));
  }

  const auto g = [&nu_log_density](double t, double) {
    return nu_log_density(t);
  };
  const double m = scan_log_max(g, 0.0, 1.0, q, t_hints);
  if (m == -kInf) throw ValueError("nu is identically zero");
  const double i0 = integrate_shifted(
      g, [](double, double) { return 1.0; }, 0.0, 1.0, m, q, 0.0, t_hints);
  const auto h = [&](double t, double omt) {
    const double lnu = nu_log_density(t);
    if (lnu == -kInf) return 0.0;  // unreachable: exp factor is zero
    const double lp = spec.prior.log_density(t, omt);
    if (lp == -kInf) {
      throw SupportViolationError(
          "nu positive where the prior vanishes (t = " + std::to_string(t) +
          ")");
    }
    return static_cast<double>(spec.n) * div(t, omt) + lnu - lp;
  };
  const double ih = integrate_shifted(g, h, 0.0, 1.0, m, q,
                                      q.rel_tol * std::max(i0, 1e-300),
                                      t_hints);
  return std::exp(m) * ih + shift;
}

double gibbs_loss_pointmass(const Loss& loss, double theta1, double theta0,
                            long n) {
  if (loss.family() != LossFamily::LogLoss) {
    throw ConditionError(
        "gibbs_loss_pointmass is defined for the log loss family only");
  }
  if (!(theta1 > 0.0 && theta1 < 1.0 && theta0 > 0.0 && theta0 < 1.0)) {
    throw DomainError("theta0 and theta1 must lie in (0,1)");
  }
  if (n < 0) throw ValueError("n must be nonnegative");
  const double kl01 = theta0 * std::log(theta0 / theta1) +
                      (1.0 - theta0) * std::log((1.0 - theta0) / (1.0 - theta1));
  return static_cast<double>(n) * loss.log_scale() * kl01;
}

BetaParams conjugate_oracle(const BetaParams& prior, long n, long successes) {
  if (!(prior.a > 0.0 && prior.b > 0.0)) {
    throw ValueError("beta parameters must be positive");
  }
  if (n < 0) throw ValueError("n must be nonnegative");
  if (successes < 0 || successes > n) {
    throw ValueError("successes must lie in [0, n]");
  }
  return {prior.a + static_cast<double>(successes),
          prior.b + static_cast<double>(n - successes)};
}

BetaParams conjugate_oracle(const Prior& prior, long n, long successes) {
  const auto [a, b] = prior.beta_params();
  return conjugate_oracle(BetaParams{a, b}, n, successes);
}

}  // namespace bgibbs
