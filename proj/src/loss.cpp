#include "bgibbs/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bgibbs/errors.hpp"
#include "spec_util.hpp"

namespace bgibbs {
namespace {

constexpr double kGridInset = 1e-4;  // interior check grid is [g, 1-g]

void require_unit_interval(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError(std::string(name) + " must lie in (0,1), got " +
                      std::to_string(x));
  }
}

double family_tol(const Loss& loss) {
  return loss.family() == LossFamily::CustomGrid ? 1e-4 : 1e-9;
}

// Conditions (iii) measured on the widest symmetric interior grid available;
// used for the cached flags of CustomGrid losses.
std::pair<bool, bool> measure_iii(const Loss& loss) {
  const auto [lo, hi] = loss.domain();
  double a = std::max({kGridInset, lo, 1.0 - hi});
  double b = std::min({1.0 - kGridInset, hi, 1.0 - lo});
  if (!(a < b)) return {false, false};
  // keep 1-x clear of the domain edge despite rounding
  const double inset = (b - a) * 1e-9;
  a += inset;
  b -= inset;
  const int n = 512;
  double max_res = 0.0, max_fp = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double x = a + (b - a) * i / n;
    const double fp = loss.deriv(x);
    max_fp = std::max(max_fp, fp);
    max_res = std::max(max_res, std::abs(x * fp - (1.0 - x) * loss.deriv(1.0 - x)));
  }
  return {max_res <= 1e-4, max_fp < 0.0};
}

}  // namespace

Loss Loss::log_loss(double scale) {
  if (!(scale > 0.0)) throw ValueError("log loss scale M must be positive");
  Loss l;
  l.family_ = LossFamily::LogLoss;
  l.scale_ = scale;
  l.iii_a_ = l.iii_b_ = true;
  l.spec_ = "log:M=" + std::to_string(scale);
  return l;
}

Loss Loss::perturbed_log(double c) {
  if (!(c > -4.0)) {
    throw ValueError("perturbed log needs c > -4 to keep f' negative");
  }
  Loss l;
  l.family_ = LossFamily::PerturbedLog;
  l.pert_ = c;
  l.iii_a_ = l.iii_b_ = true;
  l.spec_ = "plog:c=" + std::to_string(c);
  return l;
}

Loss Loss::linear() {
  Loss l;
  l.family_ = LossFamily::Linear;
  l.iii_a_ = false;  // x f'(x) = -x != -(1-x)
  l.iii_b_ = true;
  l.spec_ = "linear";
  return l;
}

Loss Loss::custom_grid(std::vector<double> x, std::vector<double> f) {
  if (x.size() < 4) throw ValueError("custom grid loss needs >= 4 points");
  for (double v : x) {
    if (!(v > 0.0 && v < 1.0)) {
      throw ValueError("custom grid abscissae must lie in (0,1)");
    }
  }
  Loss l;
  l.family_ = LossFamily::CustomGrid;
  l.curve_.emplace(std::move(x), std::move(f));
  l.spec_ = "grid:<" + std::to_string(l.curve_->knots().size()) + " points>";
  std::tie(l.iii_a_, l.iii_b_) = measure_iii(l);
  return l;
}

double Loss::raw_value(double x) const {
  require_unit_interval(x, "x");
  switch (family_) {
    case LossFamily::LogLoss:
      return -scale_ * std::log(x);
    case LossFamily::PerturbedLog:
      return -std::log(x) - pert_ * (x - 0.5 * x * x);
    case LossFamily::Linear:
      return 1.0 - x;
    case LossFamily::CustomGrid:
      return curve_->value(x);
  }
  return 0.0;
}

double Loss::value(double x) const { return raw_value(x) + offset_; }

double Loss::deriv(double x) const {
  require_unit_interval(x, "x");
  switch (family_) {
    case LossFamily::LogLoss:
      return -scale_ / x;
    case LossFamily::PerturbedLog:
      return -(1.0 + pert_ * x * (1.0 - x)) / x;
    case LossFamily::Linear:
      return -1.0;
    case LossFamily::CustomGrid:
      return curve_->deriv(x);
  }
  return 0.0;
}

Loss Loss::shifted(double c) const {
  Loss l = *this;
  l.offset_ += c;
  return l;
}

std::pair<double, double> Loss::domain() const {
  if (family_ == LossFamily::CustomGrid) {
    return {curve_->x_min(), curve_->x_max()};
  }
  return {0.0, 1.0};
}

std::optional<double> Loss::limit_at_one() const {
  switch (family_) {
    case LossFamily::LogLoss:
      return 0.0;
    case LossFamily::PerturbedLog:
      return -0.5 * pert_;
    case LossFamily::Linear:
      return 0.0;
    case LossFamily::CustomGrid:
      return std::nullopt;  // tabulated range stops short of 1
  }
  return std::nullopt;
}

std::vector<double> Loss::knots() const {
  if (family_ == LossFamily::CustomGrid) return curve_->knots();
  return {};
}

namespace {

double limit_at_one_or_throw(const Loss& loss) {
  const auto lim = loss.limit_at_one();
  if (!lim) {
    throw EndpointExtensionError(
        "loss has no finite limit at the endpoint; boundary theta_bar "
        "unsupported for '" +
        loss.spec_string() + "'");
  }
  return *lim;
}

}  // namespace

double divergence(const Loss& loss, double x, double omx, double y) {
  require_unit_interval(x, "x");
  if (!(y >= 0.0 && y <= 1.0)) {
    throw DomainError("y must lie in [0,1], got " + std::to_string(y));
  }
  // At the boundary the weight-zero term is dropped: d(x,1) = f(x) - f(1),
  // d(x,0) = f(1-x) - f(1).
  if (y == 1.0) return loss.raw_value(x) - limit_at_one_or_throw(loss);
  if (y == 0.0) return loss.raw_value(omx) - limit_at_one_or_throw(loss);
  return y * (loss.raw_value(x) - loss.raw_value(y)) +
         (1.0 - y) * (loss.raw_value(omx) - loss.raw_value(1.0 - y));
}

double divergence(const Loss& loss, double x, double y) {
  // keep the complement strictly inside (0,1) when x is extremely small
  return divergence(loss, x, std::min(1.0 - x, 1.0 - 1.1102230246251565e-16),
                    y);
}

double divergence_deriv(const Loss& loss, double x, double y) {
  require_unit_interval(x, "x");
  require_unit_interval(y, "y");
  if (!loss.passes_iii_a()) {
    throw ConditionError(
        "divergence_deriv requires condition (iii.a): x f'(x) = (1-x) f'(1-x)");
  }
  return ((y - x) / (1.0 - x)) * loss.deriv(x);
}

double divergence_second_deriv(const Loss& loss, double y) {
  require_unit_interval(y, "y");
  if (!loss.passes_condition_iii()) {
    throw ConditionError("divergence_second_deriv requires condition (iii)");
  }
  return -loss.deriv(y) / (1.0 - y);
}

double delta_eps(const Loss& loss, double theta0, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(theta0 - eps > 0.0 && theta0 + eps < 1.0)) {
    throw DomainError("the eps-interval around theta0 must stay inside (0,1)");
  }
  return std::min(divergence(loss, theta0 - eps, theta0),
                  divergence(loss, theta0 + eps, theta0));
}

ConsistencyReport check_consistency(const Loss& loss, int grid_points,
                                    double tol) {
  if (grid_points < 100) throw ValueError("grid_points must be >= 100");
  if (tol <= 0.0) tol = family_tol(loss);
  ConsistencyReport rep;
  rep.grid_points = grid_points;
  rep.tol = tol;

  const auto [lo, hi] = loss.domain();
  double a = std::max({kGridInset, lo, 1.0 - hi});
  double b = std::min({1.0 - kGridInset, hi, 1.0 - lo});
  if (!(a < b)) {
    // No symmetric interior grid exists (asymmetric tabulated domain);
    // nothing can be verified.
    rep.iii_a_pass = rep.iii_b_pass = false;
    rep.max_abs_iii_a_residual = std::numeric_limits<double>::quiet_NaN();
    rep.max_fprime = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const double inset = (b - a) * 1e-9;
  a += inset;
  b -= inset;

  double max_res = 0.0, max_fp = -std::numeric_limits<double>::infinity();
  double worst_x = a;
  for (int i = 0; i <= grid_points; ++i) {
    const double x = a + (b - a) * i / grid_points;
    const double fp = loss.deriv(x);
    const double res = std::abs(x * fp - (1.0 - x) * loss.deriv(1.0 - x));
    if (res > max_res) {
      max_res = res;
      worst_x = x;
    }
    max_fp = std::max(max_fp, fp);
  }
  rep.max_abs_iii_a_residual = max_res;
  rep.max_fprime = max_fp;
  rep.iii_a_pass = max_res <= tol;
  rep.iii_b_pass = max_fp < 0.0;
  rep.witness_points.emplace_back(worst_x, 1.0 - worst_x);
  return rep;
}

ConsistencyReport check_divergence_positivity(const Loss& loss,
                                              int grid_points, double tol) {
  if (grid_points < 8) throw ValueError("grid_points must be >= 8");
  if (tol <= 0.0) tol = family_tol(loss);
  ConsistencyReport rep;
  rep.grid_points = grid_points;
  rep.tol = tol;

  const auto [lo, hi] = loss.domain();
  double a = std::max({kGridInset, lo, 1.0 - hi});
  double b = std::min({1.0 - kGridInset, hi, 1.0 - lo});
  if (!(a < b)) {
    rep.ii_pass = false;
    rep.min_offdiag_divergence = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const double inset = (b - a) * 1e-9;
  a += inset;
  b -= inset;

  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    grid[i] = a + (b - a) * i / (grid_points - 1);
  }
  // "off the diagonal" means a macroscopic separation; near the diagonal d
  // vanishes quadratically and only the d >= -tol face is informative.
  const double band = (b - a) / 50.0;
  bool ok = true;
  double min_offdiag = std::numeric_limits<double>::infinity();
  std::pair<double, double> min_point{grid[0], grid[grid_points - 1]};
  std::vector<std::pair<double, double>> violations;
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      const double d = divergence(loss, grid[i], grid[j]);
      if (d < -tol) {
        ok = false;
        if (violations.size() < 8) violations.emplace_back(grid[i], grid[j]);
      }
      if (std::abs(grid[i] - grid[j]) >= band) {
        if (d < min_offdiag) {
          min_offdiag = d;
          min_point = {grid[i], grid[j]};
        }
        if (d <= tol) ok = false;  // a zero (or negative) off the diagonal
      }
    }
  }
  rep.ii_pass = ok;
  rep.min_offdiag_divergence = min_offdiag;
  rep.witness_points = std::move(violations);
  rep.witness_points.push_back(min_point);
  return rep;
}

ConsistencyReport merge(const ConsistencyReport& iii,
                        const ConsistencyReport& ii) {
  ConsistencyReport rep = iii;
  rep.ii_pass = ii.ii_pass;
  rep.min_offdiag_divergence = ii.min_offdiag_divergence;
  rep.witness_points.insert(rep.witness_points.end(),
                            ii.witness_points.begin(),
                            ii.witness_points.end());
  return rep;
}

Loss parse_loss_spec(const std::string& spec) {
  const std::string s = detail::trim(spec);
  const size_t colon = s.find(':');
  const std::string head = colon == std::string::npos ? s : s.substr(0, colon);
  const std::string body =
      colon == std::string::npos ? "" : s.substr(colon + 1);

  if (head == "log") {
    double m = 1.0;
    if (!body.empty()) {
      for (const auto& [k, v] : detail::parse_kv(body)) {
        if (k == "M" || k == "m") {
          m = detail::parse_double(v, "log loss scale");
        } else {
          throw ParseError("unknown log loss key '" + k + "'");
        }
      }
    }
    if (!(m > 0.0)) throw ParseError("log loss scale M must be positive");
    return Loss::log_loss(m);
  }
  if (head == "plog") {
    double c = 0.0;
    if (!body.empty()) {
      for (const auto& [k, v] : detail::parse_kv(body)) {
        if (k == "c") {
          c = detail::parse_double(v, "perturbation");
        } else {
          throw ParseError("unknown plog key '" + k + "'");
        }
      }
    }
    if (!(c > -4.0)) throw ParseError("plog perturbation must satisfy c > -4");
    return Loss::perturbed_log(c);
  }
  if (head == "linear") {
    if (!body.empty()) throw ParseError("linear loss takes no parameters");
    return Loss::linear();
  }
  if (head == "grid") {
    if (body.empty()) throw ParseError("grid loss needs a CSV path");
    auto [x, f] = detail::read_two_column_csv(body, "x", "f");
    try {
      Loss l = Loss::custom_grid(std::move(x), std::move(f));
      l.spec_ = "grid:" + body;  // keep the reparseable path form
      return l;
    } catch (const ValueError& e) {
      throw ParseError(std::string("grid loss '") + body + "': " + e.what());
    }
  }
  throw ParseError("unknown loss family '" + head +
                   "' (expected log, plog, linear, grid)");
}

}  // namespace bgibbs
