#include <doctest.h>

#include <cmath>

#include "derived_fixtures.hpp"
#include "llt/cf_analysis.hpp"
#include "llt/errors.hpp"
#include "llt/functionals.hpp"
#include "llt/numerics.hpp"

using namespace llt;

TEST_CASE("symmetrization of the uniform law")
{
  const auto u = make_uniform_interval(1.0 / std::sqrt(3.0)); // uniform[-1, 1]
  const auto s = symmetrize(u);
  CHECK(*s.max_density_closed_form == doctest::Approx(fixtures::value("uniform.sym.w0")).epsilon(1e-12));
  CHECK(s.sigma2 == doctest::Approx(2.0 * u.sigma2));
  CHECK(s.symmetric);
  // X - X' has a triangular density on [-2, 2].
  CHECK(s.pdf({ 1.0 }) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(std::abs(s.charfn({ 0.8 }) - cplx(std::norm(u.charfn({ 0.8 })))) < 1e-14);
}

TEST_CASE("L^{2m} norms of the uniform CF")
{
  const auto u = make_uniform_interval(1.0 / std::sqrt(3.0));
  CHECK(lp_norm_cf(u, 1) == doctest::Approx(fixtures::value("uniform.l2")).epsilon(1e-9));
  CHECK(lp_norm_cf(u, 2) == doctest::Approx(fixtures::value("uniform.l4")).epsilon(1e-9));
  // (e/2)^{1/2} / 2 for m = 1.
  CHECK(lp_norm_envelope(u, 1) == doctest::Approx(0.5 * std::sqrt(num::e / 2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(lp_norm_cf(u, 0), ParameterError);
}

TEST_CASE("gaussian norms are the envelope times a fixed factor")
{
  for (int d : { 1, 2, 3 }) {
    const auto g = make_gaussian(d, 1.0);
    for (int m : { 1, 4 }) {
      // (4 pi m)^{-d/2} against (e / 2m)^{d/2} (2 pi)^{-d/2}.
      const double ratio = lp_norm_cf(g, m) / lp_norm_envelope(g, m);
      CHECK(ratio == doctest::Approx(std::pow(num::e, -0.5 * d)).epsilon(1e-8));
    }
  }
}

TEST_CASE("tail integrals")
{
  const auto g = make_gaussian(1, 1.0);
  CHECK(tail_integral_cf(g, 1.0, 4) == doctest::Approx(fixtures::value("gaussian.cf_tail")).epsilon(1e-10));
  CHECK_THROWS_AS(tail_integral_cf(g, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(tail_integral_cf(g, -1.0, 4), ParameterError);
  const auto u = make_uniform_interval(1.0);
  for (int n : { 4, 16, 64 }) {
    CAPTURE(n);
    CHECK(tail_integral_cf(u, 0.5, n) <= tail_envelope(u, 0.5, n, 0.03));
  }
}

TEST_CASE("tail bounds dominate the integrals")
{
  const auto p = make_product({ make_uniform_interval(1.0), make_logistic(1.0) });
  for (double r : { 0.5, 2.0 })
    CHECK(cf_power_tail_bound(p, 4.0, r) >= cf_power_integral(p, 4.0, r) - 1e-12);
}

TEST_CASE("separation scan")
{
  const auto u = make_uniform_interval(1.0);
  const auto r = separation_scan(u, 0.5);
  CHECK(r.c_empirical > 0.0);
  CHECK(r.certified);
  CHECK(r.delta_f < 1.0);
  CHECK(r.window == doctest::Approx(40.0));
  // The d = 1 far-field floor.
  CHECK(r.c_far >= 1.0 / 3456.0);
  CHECK_THROWS_AS(separation_scan(u, 0.5, 0.0, 0), ParameterError);

  const auto b = separation_scan(make_uniform_ball(2, 1.0), 0.5);
  CHECK(b.c_empirical > 0.0);
  CHECK(b.certified);
}

TEST_CASE("truncation")
{
  const auto t = truncate(make_gaussian(2, 1.0));
  CHECK(t.r == doctest::Approx(2.0));
  CHECK(t.default_radius);
  CHECK(t.b_r == doctest::Approx(fixtures::value("gaussian_d2.b_r")).epsilon(1e-9));
  CHECK(t.mass_ok);
  CHECK(t.variance_bound_ok);
  CHECK(t.marginal_bound_ok);
  CHECK(t.directions.size() == 16);
  CHECK(t.max_variance <= 4.0);
  CHECK(t.marginal_M_bound == doctest::Approx(2.0 * 2.0 * 2.0 / (2.0 * num::pi)));

  const auto rel = truncation_relation_check(t, 10.0, 64);
  CHECK(rel.violations == 0);
  CHECK(rel.points > 0);

  CHECK_THROWS_AS(truncate(make_uniform_interval(1.0)), ParameterError);
  CHECK_THROWS_AS(truncate(make_gaussian(2, 1.0), 0.1), DegenerateTruncation);
}

TEST_CASE("truncated region example has bounded marginals")
{
  const auto r = make_unbounded_marginal_example(fixtures::value("region.c"));
  const auto t = truncate(r);
  CHECK(t.spec.bounded_projections);
  CHECK(std::isfinite(t.max_marginal));
  CHECK(t.marginal_bound_ok);
}
