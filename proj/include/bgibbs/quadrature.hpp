#pragma once

#include <functional>
#include <vector>

namespace bgibbs {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  int max_panels = 4096;
  // Endpoint-avoiding margin, applied on the transformed integration axis
  // (the sin^2 substitution below), where sqrt-type endpoint singularities
  // are already flattened out.
  double endpoint_margin = 1e-12;
};

// Throws ValueError if the config violates its invariants
// (rel_tol > 0, max_panels >= 8, margin in (0, 0.4)).
void validate(const QuadratureConfig& q);

// Log-space integrand. Both coordinates of the evaluation point are passed so
// that factors singular at either endpoint, typically log(t) and log(1-t)
// terms, can be computed without cancellation: omt equals 1-t to full
// relative precision even when t is within a few ulp of 1.
using LogIntegrand = std::function<double(double t, double omt)>;

// Signed weight multiplying exp(g - shift) in integrate_shifted.
using WeightFn = std::function<double(double t, double omt)>;

// ln of integral_a^b exp(g(t)) dt, computed by max-subtraction: the maximum m
// of g over an initial scan grid is subtracted before exponentiation, and
// m + ln(integral of exp(g - m)) is returned. Handles integrands spanning
// hundreds of orders of magnitude (returns -inf for an identically zero
// integrand). Interior panels are placed at t_hints; geometric clusters near
// both interval ends plus a uniform cover are always added. Adaptive
// Gauss-Kronrod 15(7) bisection runs until q.rel_tol or q.max_panels.
//
// Throws QuadratureError if the tolerance cannot be met within the budget.
double log_integrate(const LogIntegrand& g, double a, double b,
                     const QuadratureConfig& q,
                     const std::vector<double>& t_hints = {});

// Maximum of g over the initial scan grid for (a,b); the shift that
// log_integrate would use. Exposed so that several weighted integrals can
// share one shift and be combined as exact ratios.
double scan_log_max(const LogIntegrand& g, double a, double b,
                    const QuadratureConfig& q,
                    const std::vector<double>& t_hints = {});

// integral_a^b h(t) exp(g(t) - shift) dt for a signed weight h. The weight is
// not evaluated where exp(g - shift) underflows to zero. Refinement stops
// when the error estimate drops below max(q.rel_tol * |integral|, abs_floor).
double integrate_shifted(const LogIntegrand& g, const WeightFn& h, double a,
                         double b, double shift, const QuadratureConfig& q,
                         double abs_floor = 0.0,
                         const std::vector<double>& t_hints = {});

}  // namespace bgibbs
