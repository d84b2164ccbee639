#include "bgibbs/pchip.hpp"

#include <algorithm>
#include <cmath>

#include "bgibbs/errors.hpp"

namespace bgibbs {
namespace {

int sign(double v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

// One-sided three-point slope with the usual shape clamps.
double end_slope(double h0, double h1, double d0, double d1) {
  double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (sign(m) != sign(d0)) return 0.0;
  if (sign(d0) != sign(d1) && std::abs(m) > 3.0 * std::abs(d0)) {
    return 3.0 * d0;
  }
  return m;
}

}  // namespace

PchipCurve::PchipCurve(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValueError("pchip needs at least 2 matching abscissae/ordinates");
  }
  for (size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i] < x[i + 1])) {
      throw ValueError("pchip abscissae must be strictly increasing");
    }
  }
  const size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), m(n, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    m[0] = m[1] = delta[0];
  } else {
    for (size_t i = 1; i + 1 < n; ++i) {
      if (sign(delta[i - 1]) * sign(delta[i]) <= 0) {
        m[i] = 0.0;
      } else {
        // Weighted harmonic mean (Fritsch-Carlson).
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  auto d = std::make_shared<Data>();
  d->x = std::move(x);
  d->y = std::move(y);
  d->slope = std::move(m);
  d_ = std::move(d);
}

size_t PchipCurve::segment(double t) const {
  const auto& x = d_->x;
  if (!(t >= x.front() && t <= x.back())) {
    throw DomainError("argument outside tabulated range [" +
                      std::to_string(x.front()) + ", " +
                      std::to_string(x.back()) + "]");
  }
  auto it = std::upper_bound(x.begin(), x.end(), t);
  size_t i = static_cast<size_t>(it - x.begin());
  if (i > 0) --i;
  if (i + 1 >= x.size()) i = x.size() - 2;
  return i;
}

double PchipCurve::value(double t) const {
  const size_t i = segment(t);
  const auto& d = *d_;
  const double h = d.x[i + 1] - d.x[i];
  const double s = (t - d.x[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * d.y[i] + h10 * h * d.slope[i] + h01 * d.y[i + 1] +
         h11 * h * d.slope[i + 1];
}

double PchipCurve::deriv(double t) const {
  const size_t i = segment(t);
  const auto& d = *d_;
  const double h = d.x[i + 1] - d.x[i];
  const double s = (t - d.x[i]) / h;
  const double g00 = 6 * s * (s - 1) / h;
  const double g10 = (1 - s) * (1 - 3 * s);
  const double g01 = -g00;
  const double g11 = s * (3 * s - 2);
  return g00 * d.y[i] + g10 * d.slope[i] + g01 * d.y[i + 1] +
         g11 * d.slope[i + 1];
}

}  // namespace bgibbs
