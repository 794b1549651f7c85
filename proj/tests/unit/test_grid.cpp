#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "derived_fixtures.hpp"
#include "llt/bounds.hpp"
#include "llt/errors.hpp"
#include "llt/grid.hpp"
#include "llt/numerics.hpp"

using namespace llt;

TEST_CASE("grid geometry")
{
  const GridSpec g{ 1, 12.0, 4096 };
  CHECK(g.step() == doctest::Approx(24.0 / 4096));
  CHECK(g.freq_step() == doctest::Approx(num::pi / 12.0));
  CHECK(g.t_max() == doctest::Approx(num::pi * 4096 / 24.0));
  CHECK(g.x(0) == -12.0);
  CHECK(g.t(2048) == 0.0);
  CHECK(GridSpec{ 2, 1.0, 64 }.size() == 4096);
  CHECK(unravel(5 * 64 + 3, 2, 64) == std::vector<long long>{ 5, 3 });
}

TEST_CASE("default grids")
{
  CHECK(default_grid(1).points_per_axis == 4096);
  CHECK(default_grid(2).points_per_axis == 512);
  CHECK(default_grid(3).points_per_axis == 128);
  CHECK(default_grid(2).half_width == doctest::Approx(12.0 * std::sqrt(2.0)));
}

TEST_CASE("grid validation")
{
  CHECK_THROWS_AS(GridSpec({ 1, 12.0, 1000 }).validate(), ParameterError);
  CHECK_THROWS_AS(GridSpec({ 1, 12.0, 32 }).validate(), ParameterError);
  CHECK_THROWS_AS(GridSpec({ 4, 12.0, 64 }).validate(), UnsupportedDimension);
  CHECK_THROWS_AS(GridSpec({ 1, -1.0, 64 }).validate(), ParameterError);
  CHECK_THROWS_AS(GridSpec({ 1, 12.0, 64 }).validate(100.0), WindowError);
  CHECK_NOTHROW(GridSpec({ 1, 12.0, 64 }).validate(5.0));
}

TEST_CASE("memory cap from the environment")
{
  const GridSpec big{ 3, 10.0, 256 };
  ::setenv("LLT_LAB_MAX_GRID_MB", "64", 1);
  CHECK_THROWS_AS(big.validate(), ParameterError);
  CHECK_NOTHROW(GridSpec({ 3, 10.0, 64 }).validate());
  ::unsetenv("LLT_LAB_MAX_GRID_MB");
  CHECK_NOTHROW(big.validate());
}

TEST_CASE("analytic and transformed CFs agree")
{
  const GridSpec g{ 1, 12.0, 1024 };
  const auto f = make_asymmetric_family("skewed-triangle", 1.0);
  const auto a = cf_on_grid(f, g, CfPreference::analytic);
  const auto b = cf_on_grid(f, g, CfPreference::transformed);
  CHECK(a.source == CfSource::analytic);
  CHECK(b.source == CfSource::transformed);
  double err = 0.0;
  for (long long k = 0; k < g.points_per_axis; ++k)
    if (std::abs(g.t(k)) < 20.0)
      err = std::max(err, std::abs(a.values[k] - b.values[k]));
  CHECK(err < 1e-6);
  CHECK(std::abs(a.at_origin() - cplx(1.0)) < 1e-14);
  CHECK(a.hermitian_defect() < 1e-14);
}

TEST_CASE("inversion reproduces the uniform pair density")
{
  const auto u = make_uniform_interval(1.0);
  const GridSpec g{ 1, 12.0, 1 << 16 };
  const auto cf = product_cf({ u }, 2, g);
  InversionOptions opts;
  opts.max_tail = 1e-3;
  const auto p = invert_to_density(cf, opts);
  CHECK(p.max_value() == doctest::Approx(fixtures::value("uniform.n2.peak")).epsilon(1e-4));
  CHECK(std::abs(p.mass_defect) < 1e-6);
  CHECK_THROWS_AS(invert_to_density(cf), InsufficientWindow);
}

TEST_CASE("gaussian sums are reproduced to rounding level")
{
  const auto g = make_gaussian(2, 1.0);
  const GridSpec spec = default_grid(2);
  const auto p = invert_to_density(product_cf({ g }, 8, spec));
  const auto d = sup_distance(p, standard_normal_density);
  CHECK(d.value < 1e-10);
  CHECK(d.argmax.size() == 2);
}

TEST_CASE("sup distance is refined between nodes")
{
  const GridSpec spec{ 1, 8.0, 256 };
  DensityGrid p{ spec, std::vector<double>(256, 0.0) };
  const auto d = sup_distance(p, standard_normal_density);
  CHECK(d.value == doctest::Approx(1.0 / std::sqrt(2.0 * num::pi)).epsilon(1e-12));
  CHECK(d.grid_value <= d.value);
}

TEST_CASE("binary round trip")
{
  const GridSpec spec{ 2, 6.0, 64 };
  const auto cf = cf_on_grid(make_gaussian(2, 1.0), spec);
  std::stringstream s;
  write_binary(s, cf);
  const auto back = read_cf_binary(s);
  CHECK(back.spec.points_per_axis == 64);
  CHECK(back.spec.half_width == 6.0);
  CHECK(back.values == cf.values);

  const auto dens = invert_to_density(cf);
  std::stringstream t;
  write_binary(t, dens);
  CHECK(read_density_binary(t).values == dens.values);

  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_density_binary(bad), IoError);
}

TEST_CASE("clamping only touches negative values")
{
  DensityGrid p{ GridSpec{ 1, 1.0, 64 }, std::vector<double>(64, 0.5) };
  p.values[3] = -1e-9;
  const auto c = p.clamped();
  CHECK(c[3] == 0.0);
  CHECK(c[4] == 0.5);
  CHECK(p.values[3] < 0.0);
}
