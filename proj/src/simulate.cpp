#include "bgibbs/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "bgibbs/errors.hpp"
#include "bgibbs/laplace.hpp"

namespace bgibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::uint64_t split_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Full-avalanche stateless PRF of (seed, stream, counter).
inline std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = split_mix(a + 0x9E3779B97F4A7C15ull);
  h = split_mix(h + b + 0xD1B54A32D192ED03ull);
  h = split_mix(h + c + 0x8CB92BA72F3D8DD7ull);
  return h;
}

inline double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double logsumexp2(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

void validate_config(const ExperimentConfig& cfg, bool needs_eps) {
  if (!(cfg.theta0 > 0.0 && cfg.theta0 < 1.0)) {
    throw ValueError("theta0 must lie in (0,1)");
  }
  if (cfg.n_schedule.empty()) throw ValueError("n_schedule must be nonempty");
  for (size_t i = 0; i < cfg.n_schedule.size(); ++i) {
    if (cfg.n_schedule[i] < 0) throw ValueError("n values must be >= 0");
    if (i && cfg.n_schedule[i] <= cfg.n_schedule[i - 1]) {
      throw ValueError("n_schedule must be strictly increasing");
    }
  }
  if (needs_eps) {
    if (cfg.eps_list.empty()) throw ValueError("eps list must be nonempty");
    for (double e : cfg.eps_list) {
      if (!(e > 0.0 && cfg.theta0 - e > 0.0 && cfg.theta0 + e < 1.0)) {
        throw ValueError("eps intervals must stay inside (0,1)");
      }
    }
  }
  validate(cfg.quad);
}

double theta_bar_for(const ExperimentConfig& cfg, long n) {
  if (cfg.deterministic_theta_bar) return cfg.theta0;
  if (n == 0) return 0.0;
  const auto bits = gen_bernoulli(cfg.theta0, n, cfg.seed, 0);
  long s = 0;
  for (auto b : bits) s += b;
  return static_cast<double>(s) / static_cast<double>(n);
}

// FNV-1a over the canonical config text; a stable run identifier.
std::string run_id_for(const std::string& kind, const ExperimentConfig& cfg) {
  std::string text = kind + "|" + cfg.loss.spec_string() + "|" +
                     cfg.prior.spec_string() + "|" + std::to_string(cfg.theta0) +
                     "|" + std::to_string(cfg.seed) + "|" +
                     std::to_string(cfg.deterministic_theta_bar) + "|";
  for (long n : cfg.n_schedule) text += std::to_string(n) + ",";
  text += "|";
  for (double e : cfg.eps_list) text += std::to_string(e) + ",";
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// Runs job(i) for i in [0, count) on cfg.threads workers; results must be
// written by index so the outcome is independent of scheduling.
void parallel_for(const ExperimentConfig& cfg, size_t count,
                  const std::function<void(size_t)>& job) {
  int t = cfg.threads > 0
              ? cfg.threads
              : static_cast<int>(std::thread::hardware_concurrency());
  t = std::max(1, std::min<int>(t, static_cast<int>(count)));
  if (t == 1) {
    for (size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int k = 0; k < t; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

}  // namespace

std::vector<std::uint8_t> gen_bernoulli(double theta0, long n,
                                        std::uint64_t seed,
                                        std::uint64_t stream) {
  if (!(theta0 > 0.0 && theta0 < 1.0)) {
    throw DomainError("theta0 must lie in (0,1)");
  }
  if (n < 0) throw ValueError("n must be nonnegative");
  std::vector<std::uint8_t> bits(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    bits[static_cast<size_t>(i)] =
        to_unit(mix3(seed, stream, static_cast<std::uint64_t>(i))) < theta0;
  }
  return bits;
}

ExperimentTable run_consistency_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg, true);
  for (double e : cfg.eps_list) {
    if (!cfg.prior.support_check(cfg.theta0, e, cfg.quad)) {
      throw ValueError("prior puts no mass on the eps-interval around theta0");
    }
  }
  Timer timer;
  ExperimentTable table;
  table.kind = "consistency";
  table.config = cfg;
  table.run_id = run_id_for(table.kind, cfg);
  table.rows.resize(cfg.n_schedule.size() * cfg.eps_list.size());
  parallel_for(cfg, table.rows.size(), [&](size_t idx) {
    const long n = cfg.n_schedule[idx / cfg.eps_list.size()];
    const double eps = cfg.eps_list[idx % cfg.eps_list.size()];
    ExperimentRow row;
    row.n = n;
    row.eps = eps;
    row.theta_bar = theta_bar_for(cfg, n);
    const PosteriorSpec spec{cfg.loss, cfg.prior, n, row.theta_bar};
    row.log_measured = log_interval_mass(spec, cfg.theta0 - eps,
                                         cfg.theta0 + eps, cfg.quad);
    row.measured = std::min(std::exp(row.log_measured), 1.0);
    row.predicted = 1.0;  // the Prop. 1 limit
    row.log_predicted = 0.0;
    table.rows[idx] = row;
  });
  table.wall_seconds = timer.seconds();
  return table;
}

ExperimentTable run_rate_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg, true);
  if (!cfg.loss.passes_condition_iii()) {
    throw ConditionError("rate experiment requires a loss satisfying (iii)");
  }
  Timer timer;
  ExperimentTable table;
  table.kind = "rate";
  table.config = cfg;
  table.run_id = run_id_for(table.kind, cfg);
  table.rows.resize(cfg.n_schedule.size() * cfg.eps_list.size());
  parallel_for(cfg, table.rows.size(), [&](size_t idx) {
    const long n = cfg.n_schedule[idx / cfg.eps_list.size()];
    const double eps = cfg.eps_list[idx % cfg.eps_list.size()];
    ExperimentRow row;
    row.n = n;
    row.eps = eps;
    row.theta_bar = theta_bar_for(cfg, n);
    const PosteriorSpec spec{cfg.loss, cfg.prior, n, row.theta_bar};
    const double left =
        log_interval_mass(spec, 0.0, cfg.theta0 - eps, cfg.quad);
    const double right =
        log_interval_mass(spec, cfg.theta0 + eps, 1.0, cfg.quad);
    row.log_measured = logsumexp2(left, right);
    row.measured = std::exp(row.log_measured);
    row.log_predicted = approx_log_tail_mass(spec, cfg.theta0, eps);
    row.predicted = std::exp(row.log_predicted);
    table.rows[idx] = row;
  });
  table.wall_seconds = timer.seconds();
  return table;
}

ExperimentTable run_variance_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg, false);
  if (!cfg.loss.passes_condition_iii()) {
    throw ConditionError(
        "variance experiment requires a loss satisfying (iii)");
  }
  const double t0 = cfg.theta0;
  const double limit = -t0 * (1.0 - t0) / (t0 * cfg.loss.deriv(t0));
  Timer timer;
  ExperimentTable table;
  table.kind = "variance";
  table.config = cfg;
  table.run_id = run_id_for(table.kind, cfg);
  table.rows.resize(cfg.n_schedule.size());
  parallel_for(cfg, table.rows.size(), [&](size_t idx) {
    const long n = cfg.n_schedule[idx];
    ExperimentRow row;
    row.n = n;
    row.eps = 0.0;
    row.theta_bar = theta_bar_for(cfg, n);
    const PosteriorSpec spec{cfg.loss, cfg.prior, n, row.theta_bar};
    row.measured = static_cast<double>(n) * moments(spec, cfg.quad).variance;
    row.predicted = limit;
    row.log_measured = std::log(row.measured);
    row.log_predicted = std::log(row.predicted);
    table.rows[idx] = row;
  });
  table.wall_seconds = timer.seconds();
  return table;
}

RateFit fit_rate(const ExperimentTable& table, bool upper_half_only) {
  std::vector<ExperimentRow> rows = table.rows;
  for (const auto& r : rows) {
    if (r.eps != rows.front().eps) {
      throw ValueError("fit_rate needs a single-eps table");
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const ExperimentRow& a, const ExperimentRow& b) {
              return a.n < b.n;
            });
  if (upper_half_only && rows.size() >= 8) {
    rows.erase(rows.begin(),
               rows.begin() + static_cast<long>(rows.size() / 2));
  }
  if (rows.size() < 4) {
    throw FitError("rate fit needs at least 4 rows, got " +
                   std::to_string(rows.size()));
  }
  const size_t m = rows.size();
  std::vector<double> ns(m), ls(m), ys(m);
  for (size_t i = 0; i < m; ++i) {
    ns[i] = static_cast<double>(rows[i].n);
    ls[i] = std::log(ns[i]);
    ys[i] = rows[i].log_measured;
    if (!std::isfinite(ys[i])) {
      throw FitError("rate fit needs finite log_measured values");
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };

  RateFit fit;
  {
    // constrained: y + (1/2) ln n = C - delta n
    std::vector<double> z(m);
    for (size_t i = 0; i < m; ++i) z[i] = ys[i] + 0.5 * ls[i];
    const double nb = mean(ns), zb = mean(z);
    double sxx = 0.0, sxz = 0.0;
    for (size_t i = 0; i < m; ++i) {
      sxx += (ns[i] - nb) * (ns[i] - nb);
      sxz += (ns[i] - nb) * (z[i] - zb);
    }
    if (!(sxx > 0.0)) throw FitError("degenerate design: constant n");
    fit.delta_hat = -sxz / sxx;
    fit.intercept = zb + fit.delta_hat * nb;
    double rss = 0.0;
    for (size_t i = 0; i < m; ++i) {
      const double r = z[i] - (fit.intercept - fit.delta_hat * ns[i]);
      rss += r * r;
    }
    fit.residual = std::sqrt(rss / static_cast<double>(m));
  }
  {
    // diagnostic: y = C + s ln n - delta n, centered normal equations
    const double nb = mean(ns), lb = mean(ls), yb = mean(ys);
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (size_t i = 0; i < m; ++i) {
      const double dl = ls[i] - lb, dn = ns[i] - nb, dy = ys[i] - yb;
      a11 += dl * dl;
      a12 += dl * dn;
      a22 += dn * dn;
      b1 += dl * dy;
      b2 += dn * dy;
    }
    const double det = a11 * a22 - a12 * a12;
    if (!(std::abs(det) > 1e-12 * std::max(a11 * a22, 1e-300))) {
      throw FitError("degenerate design in the free-slope fit");
    }
    fit.half_log_slope = (b1 * a22 - b2 * a12) / det;
  }
  return fit;
}

std::string to_csv(const ExperimentTable& table) {
  std::string out =
      "n,theta_bar,eps,measured,predicted,log_measured,log_predicted,ratio\n";
  char buf[512];
  for (const auto& r : table.rows) {
    const double ratio = std::exp(r.log_measured - r.log_predicted);
    std::snprintf(buf, sizeof buf,
                  "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n,
                  r.theta_bar, r.eps, r.measured, r.predicted, r.log_measured,
                  r.log_predicted, ratio);
    out += buf;
  }
  return out;
}

}  // namespace bgibbs
