#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bgibbs/pchip.hpp"

namespace bgibbs {

enum class LossFamily { LogLoss, PerturbedLog, Linear, CustomGrid };

// A loss f on (0,1) with an analytic (or interpolant) derivative. Built-in
// families:
//   LogLoss(M):      f(x) = -M ln x,                    f'(x) = -M/x, M > 0
//   PerturbedLog(c): f(x) = -ln x - c (x - x^2/2),      f'(x) = -(1 + c x(1-x))/x,
//                    c > -4 keeps f' < 0 on (0,1)
//   Linear:          f(x) = 1 - x (fails condition iii.a; kept as the
//                    worked inconsistent example)
//   CustomGrid:      shape-preserving cubic through >= 4 tabulated points
//
// An additive offset may be attached (shifted()); posteriors and divergences
// are invariant under it, and the divergence computation cancels it
// algebraically rather than numerically.
class Loss {
 public:
  static Loss log_loss(double scale = 1.0);
  static Loss perturbed_log(double c);
  static Loss linear();
  static Loss custom_grid(std::vector<double> x, std::vector<double> f);

  double value(double x) const;  // f(x) + offset
  double deriv(double x) const;  // f'(x)

  // f(x) without the additive offset; divergences are built from these so
  // that the offset cancels exactly.
  double raw_value(double x) const;

  Loss shifted(double c) const;

  LossFamily family() const { return family_; }
  double log_scale() const { return scale_; }       // M (LogLoss)
  double perturbation() const { return pert_; }     // c (PerturbedLog)
  double offset() const { return offset_; }

  // Open interval on which f can be evaluated; (0,1) for the analytic
  // families, the tabulated range for CustomGrid.
  std::pair<double, double> domain() const;

  // Finite one-sided limit of f at x = 1 when it exists (offset excluded).
  // This is the only endpoint value the boundary divergence d(., 0) and
  // d(., 1) needs.
  std::optional<double> limit_at_one() const;

  // Whether conditions (iii.a) and (iii.b) hold; known analytically for the
  // built-in families, measured on a grid at construction for CustomGrid.
  bool passes_condition_iii() const { return iii_a_ && iii_b_; }
  bool passes_iii_a() const { return iii_a_; }

  // Interpolation knots (CustomGrid only); quadrature panel hints.
  std::vector<double> knots() const;

  const std::string& spec_string() const { return spec_; }

 private:
  friend Loss parse_loss_spec(const std::string&);
  Loss() = default;
  LossFamily family_ = LossFamily::LogLoss;
  double scale_ = 1.0;
  double pert_ = 0.0;
  double offset_ = 0.0;
  std::optional<PchipCurve> curve_;
  bool iii_a_ = true, iii_b_ = true;
  std::string spec_;
};

// Verdicts and worst-case diagnostics for the consistency conditions.
// check_consistency fills the (iii) fields, check_divergence_positivity the
// (ii) fields; merge() combines the two for reporting.
struct ConsistencyReport {
  bool iii_a_pass = false;
  bool iii_b_pass = false;
  bool ii_pass = false;
  double max_abs_iii_a_residual = 0.0;
  double max_fprime = 0.0;
  double min_offdiag_divergence = 0.0;
  std::vector<std::pair<double, double>> witness_points;
  int grid_points = 0;
  double tol = 0.0;
};

ConsistencyReport merge(const ConsistencyReport& iii,
                        const ConsistencyReport& ii);

// d(x,y) = y (f(x) - f(y)) + (1-y)(f(1-x) - f(1-y)). For y in {0,1} the
// weight-zero term is dropped and f(y-side) is replaced by the limit of f at
// 1, which must exist (EndpointExtensionError otherwise).
double divergence(const Loss& loss, double x, double y);

// Stable variant for quadrature call sites: omx must equal 1-x.
double divergence(const Loss& loss, double x, double omx, double y);

// d/dx d(x,y) = ((y-x)/(1-x)) f'(x); valid under condition (iii.a).
double divergence_deriv(const Loss& loss, double x, double y);

// d''(y,y) = -f'(y)/(1-y) > 0; valid under condition (iii).
double divergence_second_deriv(const Loss& loss, double y);

// delta(eps) = min(d(theta0 - eps, theta0), d(theta0 + eps, theta0)).
double delta_eps(const Loss& loss, double theta0, double eps);

// Scans |x f'(x) - (1-x) f'(1-x)| and the sign of f' on an interior grid.
// tol <= 0 selects the family default (1e-9 analytic, 1e-4 CustomGrid).
ConsistencyReport check_consistency(const Loss& loss, int grid_points = 400,
                                    double tol = 0.0);

// Brute-force scan of d over a 2-D interior grid: d >= -tol everywhere and
// d > tol off the diagonal band.
ConsistencyReport check_divergence_positivity(const Loss& loss,
                                              int grid_points = 200,
                                              double tol = 0.0);

// "log:M=1" | "plog:c=2" | "linear" | "grid:path.csv" (CSV columns x,f).
Loss parse_loss_spec(const std::string& spec);

}  // namespace bgibbs
