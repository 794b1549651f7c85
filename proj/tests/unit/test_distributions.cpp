#include <doctest.h>

#include <cmath>
#include <vector>

#include "derived_fixtures.hpp"
#include "llt/distributions.hpp"
#include "llt/errors.hpp"
#include "llt/numerics.hpp"

using namespace llt;

namespace {

double
moment(const DistributionSpec& d, int p)
{
  return expect_1d(d, [p](double x) { return std::pow(x, p); });
}

} // namespace

TEST_CASE("one-dimensional families are centered with unit variance")
{
  const std::vector<DistributionSpec> fams{
    make_uniform_interval(1.0),
    make_gaussian(1, 1.0),
    make_asymmetric_family(AsymmetricKind::centered_exponential, 1.0),
    make_asymmetric_family(AsymmetricKind::skewed_triangle, 1.0),
    make_logistic(1.0),
  };
  for (const auto& f : fams) {
    CAPTURE(f.name);
    CHECK(moment(f, 0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(std::abs(moment(f, 1)) < 1e-11);
    CHECK(moment(f, 2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.sigma() == doctest::Approx(1.0));
    CHECK(std::abs(f.charfn({ 0.0 }) - cplx(1.0)) < 1e-14);
  }
}

TEST_CASE("closed-form CFs agree with Fourier integrals of the densities")
{
  const std::vector<DistributionSpec> fams{
    make_uniform_interval(1.0),
    make_asymmetric_family(AsymmetricKind::centered_exponential, 1.0),
    make_asymmetric_family(AsymmetricKind::skewed_triangle, 1.0),
    make_logistic(1.0),
  };
  for (const auto& f : fams)
    for (double t : { 0.4, 1.7, 5.0 }) {
      CAPTURE(f.name);
      CAPTURE(t);
      const double re = expect_1d(f, [t](double x) { return std::cos(t * x); });
      const double im = expect_1d(f, [t](double x) { return std::sin(t * x); });
      CHECK(std::abs(f.charfn({ t }) - cplx(re, im)) < 1e-9);
    }
}

TEST_CASE("third moments and their flags")
{
  const auto tri = make_asymmetric_family("skewed-triangle", 1.0);
  CHECK(moment(tri, 3) == doctest::Approx(fixtures::value("skewed_triangle.m3")).epsilon(1e-9));
  CHECK_FALSE(tri.third_moments_vanish);
  const auto ex = make_asymmetric_family("centered-exponential", 1.0);
  CHECK(moment(ex, 3) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_FALSE(ex.symmetric);
  const auto u = make_uniform_interval(1.0);
  CHECK(u.symmetric);
  CHECK(u.third_moments_vanish);
  CHECK(u.log_concave);
}

TEST_CASE("absolute moments match the frozen fixtures")
{
  const double one[] = { 1.0 };
  CHECK(make_uniform_interval(1.0).abs_moment(one, 3.0) ==
        doctest::Approx(fixtures::value("uniform.beta3")).epsilon(1e-12));
  CHECK(make_gaussian(1, 1.0).abs_moment(one, 3.0) ==
        doctest::Approx(fixtures::value("gaussian.beta3")).epsilon(1e-12));
  CHECK(make_asymmetric_family("centered-exponential", 1.0).abs_moment(one, 3.0) ==
        doctest::Approx(fixtures::value("exponential.beta3")).epsilon(1e-10));
}

TEST_CASE("uniform ball geometry")
{
  const auto b = make_uniform_ball(2, 1.0);
  REQUIRE(b.support_radius);
  CHECK(*b.support_radius == doctest::Approx(fixtures::value("ball_d2.radius")).epsilon(1e-12));
  CHECK(b.pdf({ 0.3, -0.2 }) == doctest::Approx(1.0 / (4.0 * num::pi)).epsilon(1e-14));
  CHECK(b.pdf({ 2.1, 0.0 }) == 0.0);
  CHECK(b.rotation_invariant);
  // Radius sqrt(d + 2) gives unit variance per coordinate in every dimension.
  CHECK(*make_uniform_ball(3, 1.0).support_radius == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("gaussian in the plane")
{
  const auto g = make_gaussian(2, 1.0);
  CHECK(g.pdf({ 0.0, 0.0 }) == doctest::Approx(1.0 / (2.0 * num::pi)).epsilon(1e-14));
  CHECK(std::abs(g.charfn({ 1.0, 1.0 }) - cplx(std::exp(-1.0))) < 1e-15);
}

TEST_CASE("product laws factorize")
{
  const auto u = make_uniform_interval(1.0);
  const auto l = make_logistic(1.0);
  const auto p = make_product({ u, l });
  CHECK(p.dim == 2);
  CHECK(p.pdf({ 0.5, -1.2 }) == doctest::Approx(u.pdf({ 0.5 }) * l.pdf({ -1.2 })).epsilon(1e-14));
  CHECK(std::abs(p.charfn({ 0.7, 2.0 }) - u.charfn({ 0.7 }) * l.charfn({ 2.0 })) < 1e-15);
  CHECK(p.third_moments_vanish);
  CHECK_THROWS_AS(make_product({ u, make_uniform_interval(2.0) }), ParameterError);
}

TEST_CASE("region example")
{
  const double c = isotropic_unbounded_marginal_c();
  CHECK(c == doctest::Approx(fixtures::value("region.c")).epsilon(1e-6));
  const auto r = make_unbounded_marginal_example(c);
  CHECK_FALSE(r.bounded_projections);
  CHECK(r.pdf({ 0.0, 0.0 }) == doctest::Approx(c / 4.0).epsilon(1e-14));
  CHECK(r.pdf({ 0.9, 1.0 }) == 0.0);
  CHECK(std::abs(r.charfn({ 0.0, 0.0 }) - cplx(1.0)) < 1e-9);
}

TEST_CASE("scaling")
{
  const auto u = make_uniform_interval(1.0);
  const auto s = scaled(u, 2.0);
  CHECK(s.sigma2 == doctest::Approx(4.0));
  CHECK(s.pdf({ 1.0 }) == doctest::Approx(0.5 * u.pdf({ 0.5 })).epsilon(1e-15));
  CHECK(std::abs(s.charfn({ 0.3 }) - u.charfn({ 0.6 })) < 1e-15);
  CHECK_THROWS_AS(scaled(u, 0.0), ParameterError);
}

TEST_CASE("projected densities")
{
  const auto p = make_product({ make_uniform_interval(1.0), make_uniform_interval(1.0) });
  const double axis[] = { 1.0, 0.0 };
  CHECK(projected_density(p, axis, 0.2) == doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-8));
  const double diag[] = { std::sqrt(0.5), std::sqrt(0.5) };
  // Sum of two uniforms scaled by 1/sqrt(2): triangle peak 1/sqrt(6) at 0.
  CHECK(projected_density(p, diag, 0.0) == doctest::Approx(fixtures::value("uniform.n2.peak")).epsilon(1e-7));
}

TEST_CASE("catalog")
{
  const auto& cat = FamilyCatalog::instance();
  CHECK(cat.contains("uniform"));
  CHECK(cat.contains("unbounded-marginal"));
  CHECK_FALSE(cat.contains("cauchy"));
  CHECK_THROWS_AS(cat.make({ "cauchy" }), ParameterError);
  CHECK_THROWS_AS(cat.make({ "uniform", 2 }), UnsupportedDimension);
  const auto b = cat.make({ "uniform-ball", 3, 2.0 });
  CHECK(b.sigma() == doctest::Approx(2.0));
  const auto p = cat.make({ "product", 2, 1.0, { "uniform", "logistic" } });
  CHECK(p.family == FamilyId::product);
  // The region example is brought to the requested scale unless c is given.
  CHECK(cat.make({ "unbounded-marginal", 2 }).sigma() == doctest::Approx(1.0));
  for (const auto& f : standard_catalog())
    CHECK(f.density != nullptr);
}

TEST_CASE("invalid parameters")
{
  CHECK_THROWS_AS(make_uniform_interval(-1.0), ParameterError);
  CHECK_THROWS_AS(make_gaussian(4, 1.0), UnsupportedDimension);
  CHECK_THROWS_AS(make_asymmetric_family("zigzag", 1.0), ParameterError);
  CHECK_THROWS_AS(make_unbounded_marginal_example(0.0), ParameterError);
}
