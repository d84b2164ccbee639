#include "bgibbs/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bgibbs/errors.hpp"
#include "spec_util.hpp"

namespace bgibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_beta_fn(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double log_beta_density(double a, double b, double t, double omt) {
  return (a - 1.0) * std::log(t) + (b - 1.0) * std::log(omt) -
         log_beta_fn(a, b);
}

void require_unit_interval(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("t must lie in (0,1), got " + std::to_string(t));
  }
}

double grid_interp(const std::vector<double>& x, const std::vector<double>& p,
                   double t) {
  if (t <= x.front() || t >= x.back()) return 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  const size_t i = static_cast<size_t>(it - x.begin()) - 1;
  const double s = (t - x[i]) / (x[i + 1] - x[i]);
  const double v = (1.0 - s) * p[i] + s * p[i + 1];
  return std::max(v, 0.0);
}

}  // namespace

Prior Prior::uniform() {
  Prior pr;
  auto d = std::make_shared<Data>();
  d->family = PriorFamily::Uniform;
  d->spec = "uniform";
  pr.d_ = std::move(d);
  return pr;
}

Prior Prior::beta(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) {
    throw ValueError("beta prior needs a > 0 and b > 0");
  }
  Prior pr;
  auto d = std::make_shared<Data>();
  d->family = PriorFamily::Beta;
  d->components = {{a, b}};
  d->spec = "beta:a=" + std::to_string(a) + ",b=" + std::to_string(b);
  pr.d_ = std::move(d);
  return pr;
}

Prior Prior::beta_mixture(std::vector<double> weights,
                          std::vector<std::pair<double, double>> components) {
  if (weights.empty() || weights.size() != components.size()) {
    throw ValueError("mixture needs matching nonempty weights/components");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ValueError("mixture weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValueError("mixture weights must sum to 1, got " +
                     std::to_string(sum));
  }
  for (const auto& [a, b] : components) {
    if (!(a > 0.0 && b > 0.0)) {
      throw ValueError("mixture beta components need a > 0 and b > 0");
    }
  }
  Prior pr;
  auto d = std::make_shared<Data>();
  d->family = PriorFamily::BetaMixture;
  d->weights = std::move(weights);
  d->components = std::move(components);
  std::string s = "mix:";
  for (size_t i = 0; i < d->weights.size(); ++i) {
    if (i) s += "+";
    s += std::to_string(d->weights[i]) + "*beta:" +
         std::to_string(d->components[i].first) + "," +
         std::to_string(d->components[i].second);
  }
  d->spec = s;
  pr.d_ = std::move(d);
  return pr;
}

Prior Prior::grid_density(std::vector<double> x, std::vector<double> p,
                          const QuadratureConfig& q) {
  if (x.size() < 2 || x.size() != p.size()) {
    throw ValueError("grid density needs >= 2 matching points");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0)) {
      throw ValueError("grid density abscissae must lie in (0,1)");
    }
    if (i && !(x[i - 1] < x[i])) {
      throw ValueError("grid density abscissae must be strictly increasing");
    }
    if (!(p[i] >= 0.0)) {
      throw ValueError("grid density ordinates must be nonnegative");
    }
  }
  Prior pr;
  auto d = std::make_shared<Data>();
  d->family = PriorFamily::GridDensity;
  d->gx = std::move(x);
  d->gp = std::move(p);
  d->spec = "grid:<" + std::to_string(d->gx.size()) + " points>";
  // Normalize with the shared quadrature engine.
  const auto& gx = d->gx;
  const auto& gp = d->gp;
  const double log_norm = log_integrate(
      [&gx, &gp](double t, double) {
        const double v = grid_interp(gx, gp, t);
        return v > 0.0 ? std::log(v) : -kInf;
      },
      gx.front(), gx.back(), q, gx);
  if (log_norm == -kInf) {
    throw ValueError("grid density is identically zero");
  }
  d->grid_log_norm = log_norm;
  pr.d_ = std::move(d);
  return pr;
}

double Prior::log_density(double t, double omt) const {
  require_unit_interval(t);
  const Data& d = *d_;
  switch (d.family) {
    case PriorFamily::Uniform:
      return 0.0;
    case PriorFamily::Beta: {
      const auto& [a, b] = d.components[0];
      return log_beta_density(a, b, t, omt);
    }
    case PriorFamily::BetaMixture: {
      // log-sum-exp over the component log densities
      double mx = -kInf;
      std::vector<double> lv(d.weights.size());
      for (size_t i = 0; i < d.weights.size(); ++i) {
        lv[i] = std::log(d.weights[i]) +
                log_beta_density(d.components[i].first,
                                 d.components[i].second, t, omt);
        mx = std::max(mx, lv[i]);
      }
      if (mx == -kInf) return -kInf;
      double s = 0.0;
      for (double v : lv) s += std::exp(v - mx);
      return mx + std::log(s);
    }
    case PriorFamily::GridDensity: {
      const double v = grid_interp(d.gx, d.gp, t);
      return v > 0.0 ? std::log(v) - d.grid_log_norm : -kInf;
    }
  }
  return -kInf;
}

double Prior::log_density(double t) const { return log_density(t, 1.0 - t); }

double Prior::density(double t) const { return std::exp(log_density(t)); }

bool Prior::support_check(double theta0, double eps,
                          const QuadratureConfig& q) const {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double lo = std::max(theta0 - eps, 0.0);
  const double hi = std::min(theta0 + eps, 1.0);
  if (!(lo < hi)) {
    throw DomainError("interval does not intersect (0,1)");
  }
  const double log_mass = log_integrate(
      [this](double t, double omt) { return log_density(t, omt); }, lo, hi, q,
      knots());
  return log_mass > std::log(1e-12);
}

std::pair<double, double> Prior::beta_params() const {
  if (d_->family == PriorFamily::Beta) return d_->components[0];
  if (d_->family == PriorFamily::Uniform) return {1.0, 1.0};
  throw ValueError("prior is not a beta distribution");
}

std::vector<double> Prior::knots() const {
  if (d_->family == PriorFamily::GridDensity) return d_->gx;
  return {};
}

Prior parse_prior_spec(const std::string& spec) {
  const std::string s = detail::trim(spec);
  const size_t colon = s.find(':');
  const std::string head = colon == std::string::npos ? s : s.substr(0, colon);
  const std::string body =
      colon == std::string::npos ? "" : s.substr(colon + 1);

  auto parse_beta_params = [](const std::string& b) {
    double a = -1.0, bb = -1.0;
    if (b.find('=') != std::string::npos) {
      for (const auto& [k, v] : detail::parse_kv(b)) {
        if (k == "a") {
          a = detail::parse_double(v, "beta a");
        } else if (k == "b") {
          bb = detail::parse_double(v, "beta b");
        } else {
          throw ParseError("unknown beta key '" + k + "'");
        }
      }
    } else {
      const auto parts = detail::split(b, ',');
      if (parts.size() != 2) {
        throw ParseError("beta needs two parameters, got '" + b + "'");
      }
      a = detail::parse_double(parts[0], "beta a");
      bb = detail::parse_double(parts[1], "beta b");
    }
    if (!(a > 0.0 && bb > 0.0)) {
      throw ParseError("beta parameters must be positive");
    }
    return std::make_pair(a, bb);
  };

  if (head == "uniform") {
    if (!body.empty()) throw ParseError("uniform prior takes no parameters");
    return Prior::uniform();
  }
  if (head == "beta") {
    const auto [a, b] = parse_beta_params(body);
    return Prior::beta(a, b);
  }
  if (head == "mix") {
    // w1*comp1+w2*comp2+...; '+' splits terms except inside exponents (e+3).
    std::vector<std::string> terms;
    std::string cur;
    for (size_t i = 0; i < body.size(); ++i) {
      const char c = body[i];
      if (c == '+' && !cur.empty() &&
          !(cur.back() == 'e' || cur.back() == 'E')) {
        terms.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) terms.push_back(cur);
    if (terms.size() < 2) throw ParseError("mixture needs >= 2 terms");
    std::vector<double> weights;
    std::vector<std::pair<double, double>> comps;
    for (const std::string& term : terms) {
      const size_t star = term.find('*');
      if (star == std::string::npos) {
        throw ParseError("mixture term needs weight*component, got '" + term +
                         "'");
      }
      weights.push_back(
          detail::parse_double(term.substr(0, star), "mixture weight"));
      const std::string comp = detail::trim(term.substr(star + 1));
      if (comp == "uniform") {
        comps.emplace_back(1.0, 1.0);
      } else if (comp.rfind("beta:", 0) == 0) {
        comps.push_back(parse_beta_params(comp.substr(5)));
      } else {
        throw ParseError("mixture component must be uniform or beta:a,b");
      }
    }
    try {
      return Prior::beta_mixture(std::move(weights), std::move(comps));
    } catch (const ValueError& e) {
      throw ParseError(std::string("mixture: ") + e.what());
    }
  }
  if (head == "grid") {
    if (body.empty()) throw ParseError("grid prior needs a CSV path");
    auto [x, p] = detail::read_two_column_csv(body, "x", "p");
    try {
      Prior pr = Prior::grid_density(std::move(x), std::move(p));
      auto d2 = std::make_shared<Prior::Data>(*pr.d_);
      d2->spec = "grid:" + body;  // keep the reparseable path form
      pr.d_ = std::move(d2);
      return pr;
    } catch (const ValueError& e) {
      throw ParseError(std::string("grid prior '") + body + "': " + e.what());
    }
  }
  throw ParseError("unknown prior family '" + head +
                   "' (expected beta, uniform, mix, grid)");
}

}  // namespace bgibbs
