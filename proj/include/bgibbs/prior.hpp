#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bgibbs/quadrature.hpp"

namespace bgibbs {

enum class PriorFamily { Beta, Uniform, BetaMixture, GridDensity };

// A continuous probability density on (0,1). Beta components with a < 1 or
// b < 1 are unbounded at the endpoints; evaluation stays defined on the open
// interval and the quadrature engine's endpoint handling absorbs the
// integrable singularities. Grid densities are linearly interpolated and
// normalized once at construction by the same quadrature used everywhere
// else.
class Prior {
 public:
  static Prior uniform();
  static Prior beta(double a, double b);

  // weights > 0 summing to 1 (within 1e-9); components given as Beta
  // parameter pairs, with Uniform = Beta(1,1).
  static Prior beta_mixture(std::vector<double> weights,
                            std::vector<std::pair<double, double>> components);

  // Nonnegative ordinates over strictly increasing abscissae in (0,1);
  // density is zero outside the tabulated range.
  static Prior grid_density(std::vector<double> x, std::vector<double> p,
                            const QuadratureConfig& q = {});

  // Natural log of the density; -inf where the density vanishes.
  // Throws DomainError outside (0,1).
  double log_density(double t) const;

  // Stable variant for quadrature call sites: omt must equal 1-t.
  double log_density(double t, double omt) const;

  double density(double t) const;

  // True iff the prior puts positive mass on (theta0-eps, theta0+eps)∩(0,1).
  bool support_check(double theta0, double eps,
                     const QuadratureConfig& q = {}) const;

  PriorFamily family() const { return d_->family; }

  // Beta parameters (Beta family only; throws ValueError otherwise).
  std::pair<double, double> beta_params() const;

  // Interpolation knots (GridDensity only); quadrature panel hints.
  std::vector<double> knots() const;

  const std::string& spec_string() const { return d_->spec; }

 private:
  struct Data {
    PriorFamily family = PriorFamily::Uniform;
    std::vector<double> weights;                       // mixture
    std::vector<std::pair<double, double>> components; // mixture / single beta
    std::vector<double> gx, gp;                        // grid density
    double grid_log_norm = 0.0;
    std::string spec;
  };
  Prior() : d_(std::make_shared<Data>()) {}
  friend Prior parse_prior_spec(const std::string&);
  std::shared_ptr<const Data> d_;
};

// "beta:a=1,b=1" | "uniform" | "mix:w*beta:a,b+w*uniform" |
// "grid:path.csv" (CSV columns x,p). Beta parameters may be keyed (a=..,b=..)
// or positional (a,b) in both contexts.
Prior parse_prior_spec(const std::string& spec);

}  // namespace bgibbs
