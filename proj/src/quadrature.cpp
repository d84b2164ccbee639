#include "bgibbs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "bgibbs/errors.hpp"

namespace bgibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

// Gauss-Kronrod 15(7) nodes and weights on [-1,1] (QUADPACK dqk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kWg = {0.129484966168870, 0.279705391489277,
                                       0.381830050505119, 0.417959183673469};

// The variable change t = sin^2(pi u / 2) maps (0,1) onto itself with a
// Jacobian vanishing like sqrt at both ends, which turns integrable endpoint
// singularities (Beta densities with a or b < 1) into bounded integrands.
struct Mapped {
  double t, omt, log_jac;
};

Mapped map_u(double u) {
  // When one coordinate is below half an ulp of 1 the other rounds to
  // exactly 1.0; clamp to the open interval (the log error is ~1e-16).
  constexpr double kBelowOne = 1.0 - 1.1102230246251565e-16;
  Mapped m;
  if (u <= 0.5) {
    const double s = std::sin(0.5 * kPi * u);
    m.t = s * s;
    m.omt = std::min(1.0 - m.t, kBelowOne);
  } else {
    const double s = std::sin(0.5 * kPi * (1.0 - u));
    m.omt = s * s;
    m.t = std::min(1.0 - m.omt, kBelowOne);
  }
  // ds/du = pi sin(pi u/2) cos(pi u/2) = pi sqrt(t(1-t))
  m.log_jac = std::log(kPi) + 0.5 * (std::log(m.t) + std::log(m.omt));
  return m;
}

double u_from_t(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (t <= 0.5) return (2.0 / kPi) * std::asin(std::sqrt(t));
  return 1.0 - (2.0 / kPi) * std::asin(std::sqrt(1.0 - t));
}

struct Panel {
  double ua, ub;
  double integ;  // panel integral of weight * exp(G - shift)
  double err;    // |GK15 - G7| estimate
};

struct PanelWorse {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.err != b.err) return a.err < b.err;
    return a.ua > b.ua;  // deterministic tie-break
  }
};

class Integrator {
 public:
  Integrator(const LogIntegrand& g, const WeightFn* h, double shift,
             const QuadratureConfig& q)
      : g_(g), h_(h), shift_(shift), q_(q) {}

  // Evaluates one panel. If collect_max is non-null the node values of
  // G(u) = g + log-Jacobian are folded into *collect_max and the sums are
  // skipped (scan pass).
  Panel eval(double ua, double ub, double* collect_max = nullptr) const {
    const double c = 0.5 * (ua + ub);
    const double half = 0.5 * (ub - ua);
    double k15 = 0.0, g7 = 0.0;
    for (int j = 0; j < 7; ++j) {
      const double fm = node_value(c - half * kXgk[j], collect_max);
      const double fp = node_value(c + half * kXgk[j], collect_max);
      k15 += kWgk[j] * (fm + fp);
      if (j % 2 == 1) g7 += kWg[j / 2] * (fm + fp);
    }
    {
      const double fv = node_value(c, collect_max);
      k15 += kWgk[7] * fv;
      g7 += kWg[3] * fv;
    }
    Panel p;
    p.ua = ua;
    p.ub = ub;
    p.integ = half * k15;
    p.err = half * std::abs(k15 - g7);
    return p;
  }

 private:
  double node_value(double u, double* collect_max) const {
    const Mapped m = map_u(u);
    double gv = g_(m.t, m.omt);
    if (std::isnan(gv)) throw QuadratureError("integrand returned NaN");
    const double G = gv == -kInf ? -kInf : gv + m.log_jac;
    if (collect_max) {
      if (G > *collect_max) *collect_max = G;
      return 0.0;
    }
    const double e = std::exp(G - shift_);
    if (e == 0.0) return 0.0;
    const double hv = h_ ? (*h_)(m.t, m.omt) : 1.0;
    const double term = hv * e;
    if (!std::isfinite(term)) {
      throw QuadratureError("non-finite quadrature term");
    }
    return term;
  }

  const LogIntegrand& g_;
  const WeightFn* h_;
  double shift_;
  const QuadratureConfig& q_;
};

// Initial partition in u-space: interval ends, a uniform cover, geometric
// clusters toward both ends, and the caller's hint points.
std::vector<double> initial_breaks(double ua, double ub,
                                   const std::vector<double>& t_hints) {
  std::vector<double> us;
  us.push_back(ua);
  us.push_back(ub);
  const double w = ub - ua;
  for (int i = 1; i < 16; ++i) us.push_back(ua + w * i / 16.0);
  double step = 0.5;
  for (int k = 0; k < 26; ++k) {
    us.push_back(ua + w * step);
    us.push_back(ub - w * step);
    step *= 0.5;
  }
  for (double t : t_hints) {
    const double u = u_from_t(t);
    if (u > ua && u < ub) us.push_back(u);
  }
  std::sort(us.begin(), us.end());
  std::vector<double> out;
  for (double u : us) {
    if (out.empty() || u - out.back() > 1e-15) out.push_back(u);
  }
  if (out.size() < 2) out = {ua, ub};
  out.back() = ub;
  return out;
}

struct ClippedInterval {
  double ua, ub;
  bool empty;
};

// The margin is applied on the transformed axis, where the substitution has
// already absorbed sqrt-type endpoint singularities: a u-margin of 1e-12
// truncates O(1e-12) of mass for any Beta(a,b) prior with a,b >= 1/2.
ClippedInterval clip(double a, double b, const QuadratureConfig& q) {
  ClippedInterval c;
  c.empty = !(a < b);
  if (!c.empty) {
    c.ua = std::max(u_from_t(std::max(a, 0.0)), q.endpoint_margin);
    c.ub = std::min(u_from_t(std::min(b, 1.0)), 1.0 - q.endpoint_margin);
    c.empty = !(c.ua < c.ub);
  }
  return c;
}

// Shared adaptive driver. Returns the integral of weight * exp(g - shift).
double adapt(const LogIntegrand& g, const WeightFn* h, double shift, double a,
             double b, const QuadratureConfig& q, double abs_floor,
             const std::vector<double>& t_hints) {
  validate(q);
  const ClippedInterval iv = clip(a, b, q);
  if (iv.empty) return 0.0;

  Integrator integ(g, h, shift, q);
  const std::vector<double> breaks = initial_breaks(iv.ua, iv.ub, t_hints);

  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> active;
  std::vector<Panel> frozen;  // panels too narrow to bisect further
  double total = 0.0, err = 0.0, frozen_err = 0.0;
  int n_panels = 0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    Panel p = integ.eval(breaks[i], breaks[i + 1]);
    total += p.integ;
    err += p.err;
    active.push(p);
    ++n_panels;
  }

  auto tol = [&]() {
    return std::max({q.rel_tol * std::abs(total), abs_floor, 1e-305});
  };

  while (err + frozen_err > tol() && n_panels < q.max_panels &&
         !active.empty()) {
    Panel worst = active.top();
    active.pop();
    if (worst.ub - worst.ua < 1e-15) {
      frozen.push_back(worst);
      frozen_err += worst.err;
      err -= worst.err;
      continue;
    }
    const double mid = 0.5 * (worst.ua + worst.ub);
    Panel left = integ.eval(worst.ua, mid);
    Panel right = integ.eval(mid, worst.ub);
    total += left.integ + right.integ - worst.integ;
    err += left.err + right.err - worst.err;
    active.push(left);
    active.push(right);
    ++n_panels;
  }
  if (err + frozen_err > tol()) {
    throw QuadratureError("quadrature did not converge: error estimate " +
                          std::to_string(err + frozen_err) + " > tolerance " +
                          std::to_string(tol()) + " with " +
                          std::to_string(n_panels) + " panels");
  }

  // Deterministic compensated re-sum in axis order.
  std::vector<Panel> all = std::move(frozen);
  while (!active.empty()) {
    all.push_back(active.top());
    active.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const Panel& x, const Panel& y) { return x.ua < y.ua; });
  double sum = 0.0, comp = 0.0;
  for (const Panel& p : all) {
    const double y = p.integ - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

void validate(const QuadratureConfig& q) {
  if (!(q.rel_tol > 0.0)) throw ValueError("rel_tol must be positive");
  if (q.max_panels < 8) throw ValueError("max_panels must be at least 8");
  if (!(q.endpoint_margin > 0.0 && q.endpoint_margin < 0.4)) {
    throw ValueError("endpoint_margin must be in (0, 0.4)");
  }
}

double scan_log_max(const LogIntegrand& g, double a, double b,
                    const QuadratureConfig& q,
                    const std::vector<double>& t_hints) {
  validate(q);
  const ClippedInterval iv = clip(a, b, q);
  if (iv.empty) return -kInf;
  Integrator integ(g, nullptr, 0.0, q);
  const std::vector<double> breaks = initial_breaks(iv.ua, iv.ub, t_hints);
  double m = -kInf;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    integ.eval(breaks[i], breaks[i + 1], &m);
  }
  return m;
}

double log_integrate(const LogIntegrand& g, double a, double b,
                     const QuadratureConfig& q,
                     const std::vector<double>& t_hints) {
  const double m = scan_log_max(g, a, b, q, t_hints);
  if (m == -kInf) return -kInf;
  const double integral = adapt(g, nullptr, m, a, b, q, 0.0, t_hints);
  if (integral <= 0.0) return -kInf;
  return m + std::log(integral);
}

double integrate_shifted(const LogIntegrand& g, const WeightFn& h, double a,
                         double b, double shift, const QuadratureConfig& q,
                         double abs_floor, const std::vector<double>& t_hints) {
  return adapt(g, &h, shift, a, b, q, abs_floor, t_hints);
}

}  // namespace bgibbs
