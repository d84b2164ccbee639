#include "bgibbs/prior.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "bgibbs/errors.hpp"
#include "bgibbs/quadrature.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bgibbs;

namespace {

// Grid prior that vanishes identically on [0.4, 0.6].
Prior holed_grid_prior() {
  return Prior::grid_density({0.1, 0.35, 0.4, 0.5, 0.6, 0.65, 0.9},
                             {2.0, 2.0, 0.0, 0.0, 0.0, 2.0, 2.0});
}

std::vector<Prior> all_families() {
  return {Prior::uniform(),
          Prior::beta(2, 2),
          Prior::beta(0.5, 0.5),
          Prior::beta(5, 2),
          Prior::beta_mixture({0.5, 0.5}, {{2, 2}, {1, 1}}),
          Prior::beta_mixture({0.3, 0.7}, {{0.5, 0.5}, {4, 1}}),
          holed_grid_prior()};
}

double quad_norm(const Prior& p) {
  return log_integrate(
      [&p](double t, double omt) { return p.log_density(t, omt); }, 0.0, 1.0,
      QuadratureConfig{}, p.knots());
}

}  // namespace

TEST_SUITE_BEGIN("prior");

TEST_CASE("log densities match closed forms") {
  CHECK(Prior::uniform().log_density(0.73) == 0.0);
  CHECK(Prior::beta(2, 2).log_density(0.5) ==
        doctest::Approx(0.40546510810816438).epsilon(1e-14));
  CHECK(Prior::beta_mixture({0.5, 0.5}, {{2, 2}, {1, 1}}).log_density(0.5) ==
        doctest::Approx(0.22314355131420976).epsilon(1e-14));
  CHECK(Prior::beta(3, 1).log_density(0.2) ==
        doctest::Approx(oracle::beta_log_pdf(3, 1, 0.2)).epsilon(1e-13));
  CHECK_THROWS_AS(Prior::uniform().log_density(0.0), DomainError);
  CHECK_THROWS_AS(Prior::uniform().log_density(1.2), DomainError);
}

TEST_CASE("every family integrates to one") {
  for (const Prior& p : all_families()) {
    CHECK(std::abs(quad_norm(p)) <= 1e-8);
  }
}

TEST_CASE("densities are nonnegative across the interval") {
  for (const Prior& p : all_families()) {
    for (int i = 1; i < 500; ++i) {
      CHECK(p.density(i / 500.0) >= 0.0);
    }
  }
}

TEST_CASE("grid densities normalize whatever the input scale") {
  const Prior p = Prior::grid_density({0.1, 0.3, 0.7, 0.9},
                                      {13.0, 5.0, 5.0, 13.0});
  CHECK(std::abs(quad_norm(p)) <= 1e-8);
  CHECK(p.density(0.05) == 0.0);  // outside the tabulated range
  CHECK(p.density(0.95) == 0.0);
}

TEST_CASE("support_check detects holes and thin tails") {
  CHECK(Prior::uniform().support_check(0.5, 0.01));
  CHECK_FALSE(holed_grid_prior().support_check(0.5, 0.05));
  CHECK(holed_grid_prior().support_check(0.5, 0.25));
  // arcsine prior keeps mass near the edges: oracle value ~0.1096
  CHECK(Prior::beta(0.5, 0.5).support_check(0.9, 0.05));
  const double mass = oracle::beta_cdf(0.95, 0.5, 0.5) -
                      oracle::beta_cdf(0.85, 0.5, 0.5);
  CHECK(mass > 0.05);
  CHECK_THROWS_AS(Prior::uniform().support_check(-2.0, 0.1), DomainError);
}

TEST_CASE("construction validates parameters") {
  CHECK_THROWS_AS(Prior::beta(0, 1), ValueError);
  CHECK_THROWS_AS(Prior::beta(1, -2), ValueError);
  CHECK_THROWS_AS(Prior::beta_mixture({0.5, 0.4}, {{1, 1}, {2, 2}}),
                  ValueError);
  CHECK_THROWS_AS(Prior::beta_mixture({1.0}, {}), ValueError);
  CHECK_THROWS_AS(Prior::grid_density({0.1, 0.2}, {1.0, -1.0}), ValueError);
  CHECK_THROWS_AS(Prior::grid_density({0.2, 0.1}, {1.0, 1.0}), ValueError);
  CHECK_THROWS_AS(Prior::grid_density({0.1, 0.2}, {0.0, 0.0}), ValueError);
}

TEST_CASE("prior spec strings parse and validate") {
  CHECK(parse_prior_spec("uniform").family() == PriorFamily::Uniform);
  CHECK(parse_prior_spec("beta:a=1,b=1").beta_params() ==
        std::pair<double, double>{1.0, 1.0});
  CHECK(parse_prior_spec("beta:2,5").beta_params() ==
        std::pair<double, double>{2.0, 5.0});
  const Prior mix = parse_prior_spec("mix:0.5*beta:2,2+0.5*uniform");
  CHECK(mix.family() == PriorFamily::BetaMixture);
  CHECK(mix.log_density(0.5) ==
        doctest::Approx(0.22314355131420976).epsilon(1e-13));
  CHECK_THROWS_AS(parse_prior_spec("beta:a=0,b=1"), ParseError);
  CHECK_THROWS_AS(parse_prior_spec("mix:0.5*beta:2,2"), ParseError);
  CHECK_THROWS_AS(parse_prior_spec("mix:0.6*uniform+0.6*uniform"), ParseError);
  CHECK_THROWS_AS(parse_prior_spec("cauchy"), ParseError);
  CHECK_THROWS_AS(parse_prior_spec("grid:/no/such.csv"), ParseError);

  const auto path = std::filesystem::temp_directory_path() / "bgibbs_prior.csv";
  {
    std::ofstream out(path);
    out << "x,p\n0.1,1\n0.4,3\n0.6,3\n0.9,1\n";
  }
  const Prior g = parse_prior_spec("grid:" + path.string());
  CHECK(g.family() == PriorFamily::GridDensity);
  CHECK(std::abs(quad_norm(g)) <= 1e-8);
}

TEST_SUITE_END();
