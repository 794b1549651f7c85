#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "derived_fixtures.hpp"
#include "oracles.hpp"

TEST_CASE("every frozen value has an oracle and vice versa")
{
  std::set<std::string> frozen, regenerable;
  for (const auto& f : fixtures::table)
    frozen.insert(std::string(f.id));
  for (const auto& f : oracle::registry())
    regenerable.insert(f.id);
  CHECK(frozen == regenerable);
  CHECK_THROWS_AS(fixtures::value("no.such.fixture"), std::out_of_range);
}

TEST_CASE("oracles regenerate the frozen values")
{
  for (const auto& f : oracle::registry()) {
    CAPTURE(f.id);
    double tol = 0.0;
    for (const auto& t : fixtures::table)
      if (t.id == f.id)
        tol = t.tol;
    CHECK(std::abs(f.compute() - fixtures::value(f.id)) <= tol);
  }
}

TEST_CASE("independent routes to the same moment agree")
{
  CHECK(std::abs(oracle::uniform_beta3() - oracle::uniform_beta3_quadrature()) < 1e-12);
  CHECK(std::abs(oracle::exponential_beta3() - oracle::exponential_beta3_quadrature()) < 1e-10);
  CHECK(std::abs(oracle::exponential_beta3() - (12.0 / std::exp(1.0) - 2.0)) < 1e-15);
}

TEST_CASE("exact sum densities integrate to one")
{
  for (int n : { 2, 5 }) {
    // Pieces end at the kinks (2k - n) sqrt(3 / n) of the spline.
    std::vector<long double> cuts;
    for (int k = 0; k <= n; ++k)
      cuts.push_back((2 * k - n) * std::sqrt(3.0L / n));
    const long double a = oracle::simpson_pieces(
      [n](long double x) { return oracle::uniform_sum_density(n, x); }, cuts, 2000);
    CHECK(static_cast<double>(a) == doctest::Approx(1.0).epsilon(1e-9));
    const long double b = oracle::simpson(
      [n](long double x) { return oracle::gamma_sum_density(n, x); }, -std::sqrt((long double)n),
      40.0L, 40000);
    CHECK(static_cast<double>(b) == doctest::Approx(1.0).epsilon(1e-6));
  }
}
