#include "llt/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/roots.hpp>

#include "llt/errors.hpp"
#include "llt/numerics.hpp"

namespace llt {

using num::pi;

namespace {

void
require_positive_sigma(double sigma)
{
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("sigma must be positive and finite, got " +
                         std::to_string(sigma));
}

void
require_dim(int dim, int lo, int hi)
{
  if (dim < lo || dim > hi)
    throw UnsupportedDimension("dimension " + std::to_string(dim) +
                               " outside supported range [" +
                               std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
}

double
norm2(Point x)
{
  double s = 0.0;
  for (double v : x)
    s += v * v;
  return s;
}

//! Absolute moments of a 1-d law, cached for p = 3, 4.
AbsMomentFn
cached_abs_moment_1d(const DistributionSpec& dist)
{
  auto moment = [lo = dist.lo,
                 hi = dist.hi,
                 breaks = dist.breakpoints,
                 density = dist.density](double p) {
    std::vector<double> b = breaks;
    b.push_back(0.0);
    return num::integrate(
      [&](double x) {
        std::array<double, 1> pt{ x };
        return std::pow(std::abs(x), p) * density(pt);
      },
      lo,
      hi,
      b,
      1e-13);
  };
  const double m3 = moment(3.0);
  const double m4 = moment(4.0);
  return [=](Point theta, double p) {
    const double scale = std::pow(std::abs(theta[0]), p);
    if (p == 3.0)
      return scale * m3;
    if (p == 4.0)
      return scale * m4;
    return scale * moment(p);
  };
}

} // namespace

double
DistributionSpec::sigma() const
{
  return std::sqrt(sigma2);
}

double
DistributionSpec::pdf(std::initializer_list<double> x) const
{
  return density(Point(x.begin(), x.size()));
}

cplx
DistributionSpec::charfn(std::initializer_list<double> t) const
{
  return cf(Point(t.begin(), t.size()));
}

double
DistributionSpec::extent() const
{
  return std::max(std::abs(lo), std::abs(hi));
}

double
expect_1d(const DistributionSpec& dist,
          const std::function<double(double)>& g,
          double tol)
{
  return num::integrate(
    [&](double x) {
      std::array<double, 1> pt{ x };
      return g(x) * dist.density(pt);
    },
    dist.lo,
    dist.hi,
    dist.breakpoints,
    tol);
}

DistributionSpec
make_uniform_interval(double sigma)
{
  require_positive_sigma(sigma);
  const double a = sigma * std::sqrt(3.0);
  DistributionSpec d;
  d.family = FamilyId::uniform_interval;
  d.name = "uniform";
  d.dim = 1;
  d.sigma2 = sigma * sigma;
  d.symmetric = true;
  d.third_moments_vanish = true;
  d.log_concave = true;
  d.rotation_invariant = true;
  d.support_radius = a;
  d.max_density_closed_form = 1.0 / (2.0 * a);
  d.lo = -a;
  d.hi = a;
  d.breakpoints = { -a, a };
  d.density = [a](Point x) {
    const double ax = std::abs(x[0]);
    if (ax < a)
      return 1.0 / (2.0 * a);
    return ax == a ? 0.25 / a : 0.0;
  };
  d.cf = [a](Point t) { return cplx(num::ball_cf_radial(1, a * t[0]), 0.0); };
  d.abs_moment = [a](Point theta, double p) {
    return std::pow(std::abs(theta[0]) * a, p) / (p + 1.0);
  };
  d.radial_density = [a](double r) { return r <= a ? 1.0 / (2.0 * a) : 0.0; };
  return d;
}

DistributionSpec
make_uniform_ball(int dim, double sigma)
{
  require_dim(dim, 1, 3);
  require_positive_sigma(sigma);
  if (dim == 1)
    return make_uniform_interval(sigma);
  // E X_1^2 = r^2 / (d + 2)
  const double r = sigma * std::sqrt(dim + 2.0);
  const double m = 1.0 / (num::unit_ball_volume(dim) * std::pow(r, dim));
  DistributionSpec d;
  d.family = FamilyId::uniform_ball;
  d.name = "uniform-ball";
  d.dim = dim;
  d.sigma2 = sigma * sigma;
  d.symmetric = true;
  d.third_moments_vanish = true;
  d.log_concave = true;
  d.rotation_invariant = true;
  d.support_radius = r;
  d.max_density_closed_form = m;
  d.lo = -r;
  d.hi = r;
  d.density = [r, m](Point x) {
    const double q = norm2(x);
    if (q < r * r)
      return m;
    return q == r * r ? 0.5 * m : 0.0;
  };
  d.radial_density = [r, m](double rho) { return rho <= r ? m : 0.0; };
  d.line_breaks = [r](Point o, Point u) {
    double ou = 0.0;
    for (std::size_t i = 0; i < o.size(); ++i)
      ou += o[i] * u[i];
    const double disc = ou * ou - (norm2(o) - r * r);
    if (disc <= 0.0)
      return std::vector<double>{};
    const double q = std::sqrt(disc);
    return std::vector<double>{ -ou - q, -ou + q };
  };
  d.cf = [r, dim](Point t) {
    return cplx(num::ball_cf_radial(dim, r * std::sqrt(norm2(t))), 0.0);
  };
  // Marginal density m * omega_{d-1} (r^2 - s^2)^{(d-1)/2}; its absolute
  // moments are Beta integrals.
  const double wdm1 = num::unit_ball_volume(dim - 1);
  d.abs_moment = [r, m, wdm1, dim](Point, double p) {
    return m * wdm1 * std::pow(r, p + dim) *
           boost::math::beta(0.5 * (p + 1.0), 0.5 * (dim + 1.0));
  };
  d.projected_density = [r, m, wdm1, dim](Point, double s) {
    const double q = r * r - s * s;
    return q > 0.0 ? m * wdm1 * std::pow(q, 0.5 * (dim - 1)) : 0.0;
  };
  return d;
}

DistributionSpec
make_gaussian(int dim, double sigma)
{
  require_dim(dim, 1, 3);
  require_positive_sigma(sigma);
  const double s2 = sigma * sigma;
  const double norm = std::pow(2.0 * pi * s2, -0.5 * dim);
  DistributionSpec d;
  d.family = FamilyId::gaussian;
  d.name = "gaussian";
  d.dim = dim;
  d.sigma2 = s2;
  d.symmetric = true;
  d.third_moments_vanish = true;
  d.log_concave = true;
  d.rotation_invariant = true;
  d.max_density_closed_form = norm;
  d.lo = -40.0 * sigma;
  d.hi = 40.0 * sigma;
  if (dim == 1)
    d.breakpoints = { -8.0 * sigma, 0.0, 8.0 * sigma };
  d.density = [norm, s2](Point x) { return norm * std::exp(-0.5 * norm2(x) / s2); };
  d.radial_density = [norm, s2](double r) {
    return norm * std::exp(-0.5 * r * r / s2);
  };
  d.cf = [s2](Point t) { return cplx(std::exp(-0.5 * s2 * norm2(t)), 0.0); };
  d.abs_moment = [sigma](Point, double p) {
    return std::pow(sigma, p) * num::gaussian_abs_moment(p);
  };
  d.projected_density = [s2](Point, double s) {
    return std::exp(-0.5 * s * s / s2) / std::sqrt(2.0 * pi * s2);
  };
  return d;
}

namespace {

DistributionSpec
make_centered_exponential(double sigma)
{
  DistributionSpec d;
  d.family = FamilyId::centered_exponential;
  d.name = "centered-exponential";
  d.dim = 1;
  d.sigma2 = sigma * sigma;
  d.log_concave = true;
  d.max_density_closed_form = 1.0 / sigma;
  d.lo = -sigma;
  d.hi = 60.0 * sigma;
  d.breakpoints = { -sigma, 0.0, 4.0 * sigma, 16.0 * sigma };
  d.density = [sigma](Point x) {
    const double y = x[0] / sigma + 1.0;
    if (y > 0.0)
      return std::exp(-y) / sigma;
    return y == 0.0 ? 0.5 / sigma : 0.0;
  };
  d.cf = [sigma](Point t) {
    const double u = sigma * t[0];
    return std::exp(cplx(0.0, -u)) / cplx(1.0, -u);
  };
  d.abs_moment = cached_abs_moment_1d(d);
  return d;
}

//! Right triangle on [0, 1] with density 2(1 - y), centered and scaled.
DistributionSpec
make_skewed_triangle(double sigma)
{
  const double s = sigma * std::sqrt(18.0);
  DistributionSpec d;
  d.family = FamilyId::skewed_triangle;
  d.name = "skewed-triangle";
  d.dim = 1;
  d.sigma2 = sigma * sigma;
  d.log_concave = true;
  d.max_density_closed_form = 2.0 / s;
  d.support_radius = 2.0 * s / 3.0;
  d.lo = -s / 3.0;
  d.hi = 2.0 * s / 3.0;
  d.breakpoints = { d.lo, d.hi };
  d.density = [s](Point x) {
    const double y = x[0] / s + 1.0 / 3.0;
    if (y < 0.0 || y > 1.0)
      return 0.0;
    const double v = 2.0 * (1.0 - y) / s;
    return y == 0.0 ? 0.5 * v : v;
  };
  d.cf = [s](Point t) {
    const double u = s * t[0];
    cplx base;
    if (std::abs(u) < 1e-2) {
      const double u2 = u * u;
      base = cplx(1.0 - u2 / 12.0 + u2 * u2 / 360.0,
                  u / 3.0 - u2 * u / 60.0 + u2 * u2 * u / 2520.0);
    } else {
      base = 2.0 * (cplx(1.0, u) - std::exp(cplx(0.0, u))) / (u * u);
    }
    return std::exp(cplx(0.0, -u / 3.0)) * base;
  };
  d.abs_moment = cached_abs_moment_1d(d);
  return d;
}

} // namespace

DistributionSpec
make_asymmetric_family(AsymmetricKind kind, double sigma)
{
  require_positive_sigma(sigma);
  switch (kind) {
    case AsymmetricKind::centered_exponential:
      return make_centered_exponential(sigma);
    case AsymmetricKind::skewed_triangle:
      return make_skewed_triangle(sigma);
  }
  throw ParameterError("unknown asymmetric family");
}

DistributionSpec
make_asymmetric_family(std::string_view kind, double sigma)
{
  if (kind == "centered-exponential")
    return make_asymmetric_family(AsymmetricKind::centered_exponential, sigma);
  if (kind == "skewed-triangle")
    return make_asymmetric_family(AsymmetricKind::skewed_triangle, sigma);
  throw ParameterError("unknown asymmetric family kind '" + std::string(kind) +
                       "'");
}

DistributionSpec
make_logistic(double sigma)
{
  require_positive_sigma(sigma);
  // Var = s^2 pi^2 / 3
  const double s = sigma * std::sqrt(3.0) / pi;
  DistributionSpec d;
  d.family = FamilyId::logistic;
  d.name = "logistic";
  d.dim = 1;
  d.sigma2 = sigma * sigma;
  d.symmetric = true;
  d.third_moments_vanish = true;
  d.log_concave = true;
  d.rotation_invariant = true;
  d.max_density_closed_form = 1.0 / (4.0 * s);
  d.lo = -40.0 * sigma;
  d.hi = 40.0 * sigma;
  d.breakpoints = { -8.0 * sigma, 0.0, 8.0 * sigma };
  d.density = [s](Point x) {
    const double c = std::cosh(0.5 * x[0] / s);
    return 1.0 / (4.0 * s * c * c);
  };
  d.cf = [s](Point t) {
    const double u = pi * s * t[0];
    if (std::abs(u) < 1e-4)
      return cplx(1.0 - u * u / 6.0, 0.0);
    if (std::abs(u) > 700.0)
      return cplx(0.0, 0.0);
    return cplx(u / std::sinh(u), 0.0);
  };
  d.abs_moment = cached_abs_moment_1d(d);
  return d;
}

DistributionSpec
make_product(const std::vector<DistributionSpec>& components)
{
  if (components.size() != 2)
    throw UnsupportedDimension("product family supports exactly 2 components");
  for (const auto& c : components)
    if (c.dim != 1)
      throw ParameterError("product components must be 1-dimensional");
  const auto& a = components[0];
  const auto& b = components[1];
  if (std::abs(a.sigma2 - b.sigma2) > 1e-12 * a.sigma2)
    throw ParameterError("product components must share the same variance");

  auto pa = std::make_shared<const DistributionSpec>(a);
  auto pb = std::make_shared<const DistributionSpec>(b);
  DistributionSpec d;
  d.family = FamilyId::product;
  d.name = "product(" + a.name + "," + b.name + ")";
  d.dim = 2;
  d.sigma2 = a.sigma2;
  d.symmetric = a.symmetric && b.symmetric;
  d.third_moments_vanish = a.third_moments_vanish && b.third_moments_vanish;
  d.log_concave = a.log_concave && b.log_concave;
  d.rotation_invariant = false;
  if (a.support_radius && b.support_radius)
    d.support_radius = std::hypot(*a.support_radius, *b.support_radius);
  if (a.max_density_closed_form && b.max_density_closed_form)
    d.max_density_closed_form =
      *a.max_density_closed_form * *b.max_density_closed_form;
  const double r = std::hypot(a.extent(), b.extent());
  d.lo = -r;
  d.hi = r;
  d.components = { pa, pb };
  d.density = [pa, pb](Point x) {
    std::array<double, 1> x0{ x[0] }, x1{ x[1] };
    return pa->density(x0) * pb->density(x1);
  };
  d.cf = [pa, pb](Point t) {
    std::array<double, 1> t0{ t[0] }, t1{ t[1] };
    return pa->cf(t0) * pb->cf(t1);
  };
  d.line_breaks = [pa, pb](Point o, Point u) {
    std::vector<double> out;
    for (int axis = 0; axis < 2; ++axis) {
      if (std::abs(u[axis]) < 1e-15)
        continue;
      for (double b : (axis == 0 ? pa : pb)->breakpoints)
        out.push_back((b - o[axis]) / u[axis]);
    }
    return out;
  };

  std::array<double, 1> unit{ 1.0 };
  const double m4a = a.abs_moment(unit, 4.0);
  const double m4b = b.abs_moment(unit, 4.0);
  const double s2 = a.sigma2;
  d.abs_moment = [pa, pb, m4a, m4b, s2](Point theta, double p) {
    const double ta = theta[0], tb = theta[1];
    std::array<double, 1> one{ 1.0 };
    if (p == 2.0)
      return s2 * (ta * ta + tb * tb);
    if (p == 4.0)
      return ta * ta * ta * ta * m4a + 6.0 * ta * ta * tb * tb * s2 * s2 +
             tb * tb * tb * tb * m4b;
    if (std::abs(ta) < 1e-15)
      return std::pow(std::abs(tb), p) * pb->abs_moment(one, p);
    if (std::abs(tb) < 1e-15)
      return std::pow(std::abs(ta), p) * pa->abs_moment(one, p);
    // E|ta X + tb Y|^p = E_Y h(tb Y), h(c) = E|ta X + c|^p.
    auto inner = [&](double c) {
      std::vector<double> breaks = pa->breakpoints;
      breaks.push_back(-c / ta);
      return num::integrate_fixed(
        [&](double x) {
          std::array<double, 1> pt{ x };
          return std::pow(std::abs(ta * x + c), p) * pa->density(pt);
        },
        pa->lo,
        pa->hi,
        breaks,
        12,
        20);
    };
    std::vector<double> outer_breaks = pb->breakpoints;
    for (double xa : pa->breakpoints)
      outer_breaks.push_back(-ta * xa / tb);
    outer_breaks.push_back(0.0);
    return num::integrate_fixed(
      [&](double y) {
        std::array<double, 1> pt{ y };
        const double w = pb->density(pt);
        return w == 0.0 ? 0.0 : w * inner(tb * y);
      },
      pb->lo,
      pb->hi,
      outer_breaks,
      12,
      20);
  };
  return d;
}

namespace {

struct RegionMoments
{
  double ex1sq;
  double ex2sq;
};

RegionMoments
region_second_moments(double c)
{
  const double x2max = 50.0 / c;
  const std::array<double, 1> br{ 0.0 };
  const double ex1 = num::integrate(
    [c](double x2) {
      const double w = std::exp(-c * std::abs(x2));
      return 0.25 * c * (2.0 / 3.0) * w * w * w;
    },
    -x2max,
    x2max,
    br);
  const double ex2 = num::integrate(
    [c](double x2) {
      const double w = std::exp(-c * std::abs(x2));
      return 0.25 * c * 2.0 * w * x2 * x2;
    },
    -x2max,
    x2max,
    br);
  return { ex1, ex2 };
}

} // namespace

double
isotropic_unbounded_marginal_c()
{
  auto g = [](double c) {
    const auto m = region_second_moments(c);
    return m.ex1sq - m.ex2sq;
  };
  boost::math::tools::eps_tolerance<double> tol(50);
  const auto root = boost::math::tools::bisect(g, 1.0, 10.0, tol);
  return 0.5 * (root.first + root.second);
}

DistributionSpec
make_unbounded_marginal_example(double c)
{
  if (!(c > 0.0))
    throw ParameterError("region constant c must be positive");
  const auto m = region_second_moments(c);
  if (std::abs(m.ex1sq - m.ex2sq) > 1e-6 * m.ex1sq)
    throw ParameterError("c = " + std::to_string(c) +
                         " does not make the region example isotropic");
  const double x2max = 50.0 / c;
  DistributionSpec d;
  d.family = FamilyId::unbounded_marginal;
  d.name = "unbounded-marginal";
  d.dim = 2;
  d.sigma2 = 0.5 * (m.ex1sq + m.ex2sq);
  d.symmetric = true;
  d.third_moments_vanish = true;
  d.log_concave = false;
  d.bounded_projections = false;
  d.max_density_closed_form = 0.25 * c;
  d.lo = -x2max;
  d.hi = x2max;
  d.density = [c](Point x) {
    const double w = std::exp(-c * std::abs(x[1]));
    return std::abs(x[0]) <= w ? 0.25 * c : 0.0;
  };
  d.line_breaks = [c, x2max](Point o, Point u) {
    std::vector<double> out;
    if (std::abs(u[1]) < 1e-15) {
      const double w = std::exp(-c * std::abs(o[1]));
      out = { (-w - o[0]) / u[0], (w - o[0]) / u[0] };
      return out;
    }
    // Kink of e^{-c|x2|} where the line crosses x2 = 0.
    out.push_back(-o[1] / u[1]);
    if (std::abs(u[0]) < 1e-15) {
      if (std::abs(o[0]) > 0.0 && std::abs(o[0]) < 1.0) {
        const double h = -std::log(std::abs(o[0])) / c;
        out.push_back((h - o[1]) / u[1]);
        out.push_back((-h - o[1]) / u[1]);
      }
      return out;
    }
    // General direction: bracket sign changes of |x1| - e^{-c|x2|}.
    auto g = [&](double v) {
      return std::abs(o[0] + v * u[0]) - std::exp(-c * std::abs(o[1] + v * u[1]));
    };
    const double reach = std::hypot(x2max, 1.0) + std::hypot(o[0], o[1]);
    const int samples = 4000;
    double prev_v = -reach, prev = g(prev_v);
    boost::math::tools::eps_tolerance<double> tol(45);
    for (int i = 1; i <= samples; ++i) {
      const double v = -reach + 2.0 * reach * i / samples;
      const double cur = g(v);
      if ((prev < 0.0) != (cur < 0.0)) {
        const auto r = boost::math::tools::bisect(g, prev_v, v, tol);
        out.push_back(0.5 * (r.first + r.second));
      }
      prev_v = v;
      prev = cur;
    }
    return out;
  };
  // f(t) = c * int_0^inf cos(t2 x2) sin(t1 w) / t1 dx2 with w = e^{-c x2};
  // real since the law is symmetric in each coordinate.
  d.cf_kind = CfKind::quadrature;
  d.cf = [c, x2max](Point t) {
    const double t1 = t[0], t2 = t[1];
    auto integrand = [&](double x2) {
      const double w = std::exp(-c * x2);
      const double s = std::abs(t1) < 1e-300 ? w : std::sin(t1 * w) / t1;
      return std::cos(t2 * x2) * s;
    };
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    return cplx(c * gk::integrate(integrand, 0.0, x2max, 12, 1e-11), 0.0);
  };
  d.abs_moment = [c, x2max](Point theta, double p) {
    const double a = theta[0], b = theta[1];
    auto inner = [&](double x2) {
      const double w = std::exp(-c * std::abs(x2));
      const double beta = b * x2;
      if (std::abs(a) < 1e-15)
        return 2.0 * w * std::pow(std::abs(beta), p);
      auto prim = [&](double x1) {
        const double u = a * x1 + beta;
        return std::copysign(std::pow(std::abs(u), p + 1.0), u) /
               (a * (p + 1.0));
      };
      return prim(w) - prim(-w);
    };
    // inner() has kinks where a x1 + b x2 vanishes at an endpoint x1 = +-w.
    std::vector<double> br{ 0.0 };
    if (std::abs(a) > 1e-15 && std::abs(b) > 1e-15) {
      boost::math::tools::eps_tolerance<double> tol(50);
      for (double sgn : { 1.0, -1.0 }) {
        auto h = [&](double x2) {
          return sgn * a * std::exp(-c * std::abs(x2)) + b * x2;
        };
        const int samples = 64;
        double prev_x = -x2max, prev = h(prev_x);
        for (int i = 1; i <= samples; ++i) {
          const double x = -x2max + 2.0 * x2max * i / samples;
          const double cur = h(x);
          if ((prev < 0.0) != (cur < 0.0)) {
            const auto r = boost::math::tools::bisect(h, prev_x, x, tol);
            br.push_back(0.5 * (r.first + r.second));
          }
          prev_x = x;
          prev = cur;
        }
      }
    }
    return 0.25 * c * num::integrate(inner, -x2max, x2max, br, 1e-11, 10);
  };
  return d;
}

DistributionSpec
scaled(const DistributionSpec& dist, double lambda)
{
  if (!(lambda > 0.0))
    throw ParameterError("scale factor must be positive");
  auto base = std::make_shared<const DistributionSpec>(dist);
  DistributionSpec d = dist;
  d.family = FamilyId::scaled;
  d.name = dist.name;
  d.sigma2 = dist.sigma2 * lambda * lambda;
  const int dim = dist.dim;
  const double jac = std::pow(lambda, -dim);
  if (dist.support_radius)
    d.support_radius = *dist.support_radius * lambda;
  if (dist.max_density_closed_form)
    d.max_density_closed_form = *dist.max_density_closed_form * jac;
  d.lo = dist.lo * lambda;
  d.hi = dist.hi * lambda;
  for (double& b : d.breakpoints)
    b *= lambda;
  d.components = { base };
  d.density = [base, lambda, jac, dim](Point x) {
    std::array<double, 3> y{};
    for (int i = 0; i < dim; ++i)
      y[i] = x[i] / lambda;
    return jac * base->density(Point(y.data(), dim));
  };
  d.cf = [base, lambda, dim](Point t) {
    std::array<double, 3> u{};
    for (int i = 0; i < dim; ++i)
      u[i] = t[i] * lambda;
    return base->cf(Point(u.data(), dim));
  };
  d.abs_moment = [base, lambda](Point theta, double p) {
    return std::pow(lambda, p) * base->abs_moment(theta, p);
  };
  if (dist.projected_density)
    d.projected_density = [base, lambda](Point theta, double s) {
      return base->projected_density(theta, s / lambda) / lambda;
    };
  if (dist.radial_density)
    d.radial_density = [base, lambda, jac](double r) {
      return jac * base->radial_density(r / lambda);
    };
  if (dist.line_breaks)
    d.line_breaks = [base, lambda, dim](Point o, Point u) {
      std::array<double, 3> y{};
      for (int i = 0; i < dim; ++i)
        y[i] = o[i] / lambda;
      auto out = base->line_breaks(Point(y.data(), dim), u);
      for (double& v : out)
        v *= lambda;
      return out;
    };
  return d;
}

double
projected_density(const DistributionSpec& dist, Point theta, double s)
{
  if (dist.dim == 1) {
    std::array<double, 1> x{ s * theta[0] };
    return dist.density(x);
  }
  if (dist.projected_density)
    return dist.projected_density(theta, s);
  const double reach = dist.support_radius.value_or(dist.extent());
  const double q = reach * reach - s * s;
  if (q <= 0.0)
    return 0.0;
  const double umax = std::sqrt(q);
  if (dist.dim == 2) {
    const std::array<double, 2> origin{ s * theta[0], s * theta[1] };
    const std::array<double, 2> dir{ -theta[1], theta[0] };
    auto br = line_breaks(dist, origin, dir);
    br.push_back(0.0);
    return num::integrate(
      [&](double u) {
        std::array<double, 2> x{ origin[0] + u * dir[0], origin[1] + u * dir[1] };
        return dist.density(x);
      },
      -umax,
      umax,
      br,
      1e-11,
      14);
  }
  if (dist.dim == 3 && dist.rotation_invariant && dist.radial_density) {
    return num::integrate(
      [&](double u) {
        return 2.0 * pi * u * dist.radial_density(std::sqrt(s * s + u * u));
      },
      0.0,
      umax,
      {},
      1e-11,
      14);
  }
  throw UnsupportedDimension("projected density not available for " +
                             dist.name + " in dimension " +
                             std::to_string(dist.dim));
}

std::vector<double>
line_breaks(const DistributionSpec& dist, Point origin, Point dir)
{
  if (dist.dim == 1) {
    std::vector<double> out;
    if (std::abs(dir[0]) > 0.0)
      for (double b : dist.breakpoints)
        out.push_back((b - origin[0]) / dir[0]);
    return out;
  }
  if (dist.line_breaks)
    return dist.line_breaks(origin, dir);
  return {};
}

std::vector<WeightedNode>
density_nodes(const DistributionSpec& dist, double radius, int pieces, int order)
{
  const auto& gl = num::gauss_legendre(order);
  std::vector<WeightedNode> out;
  // Composite rule on [a, b] split at the given cuts.
  auto panels = [&](double a, double b, std::vector<double> cuts, auto&& emit) {
    for (int i = 1; i < pieces; ++i)
      cuts.push_back(a + (b - a) * i / pieces);
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = std::max(a, cuts[i]), hi = std::min(b, cuts[i + 1]);
      if (!(hi > lo))
        continue;
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int q = 0; q < order; ++q)
        emit(mid + half * gl.nodes[q], half * gl.weights[q]);
    }
  };
  if (dist.dim == 1) {
    const double a = std::max(dist.lo, -radius), b = std::min(dist.hi, radius);
    panels(a, b, dist.breakpoints, [&](double x, double w) {
      WeightedNode node;
      node.x[0] = x;
      std::array<double, 1> pt{ x };
      node.w = w * dist.density(pt);
      if (node.w != 0.0)
        out.push_back(node);
    });
    return out;
  }
  if (dist.dim != 2)
    throw UnsupportedDimension("density_nodes supports d <= 2");
  const double reach = std::min(radius, dist.extent());
  const std::array<double, 2> vertical{ 0.0, 1.0 };
  const std::array<double, 2> horizontal{ 1.0, 0.0 };
  const std::array<double, 2> zero{ 0.0, 0.0 };
  auto outer = line_breaks(dist, zero, vertical);
  outer.push_back(0.0);
  // Jump curves crossing a few vertical lines mark where the inner
  // integral loses smoothness.
  for (int i = -8; i <= 8; ++i) {
    const std::array<double, 2> o{ 0.999 * reach * i / 8.0, 0.0 };
    for (double v : line_breaks(dist, o, vertical))
      outer.push_back(v);
  }
  auto inner = [&](double x2, double w2, double half) {
    if (!(half > 0.0))
      return;
    const std::array<double, 2> o{ 0.0, x2 };
    panels(-half, half, line_breaks(dist, o, horizontal), [&](double x1, double w1) {
      WeightedNode node;
      node.x = { x1, x2, 0.0 };
      node.w = w1 * w2 * dist.density(Point(node.x.data(), 2));
      if (node.w != 0.0)
        out.push_back(node);
    });
  };
  if (!(reach < radius)) {
    // x2 = radius sin(phi) removes the square-root endpoint behaviour of
    // the chord length.
    std::vector<double> angles;
    for (double v : outer)
      if (std::abs(v) < radius)
        angles.push_back(std::asin(v / radius));
    panels(-0.5 * pi, 0.5 * pi, angles, [&](double phi, double w) {
      inner(radius * std::sin(phi), w * radius * std::cos(phi),
            radius * std::cos(phi));
    });
  } else {
    panels(-reach, reach, outer, [&](double x2, double w2) {
      const double chord = std::isfinite(radius)
                             ? std::sqrt(std::max(0.0, radius * radius - x2 * x2))
                             : dist.extent();
      inner(x2, w2, std::min(chord, dist.extent()));
    });
  }
  return out;
}

FamilyCatalog::FamilyCatalog()
{
  infos_ = {
    { "uniform", "uniform law on a centered interval", { 1 } },
    { "uniform-ball", "uniform law on a centered Euclidean ball", { 1, 2, 3 } },
    { "gaussian", "isotropic normal law", { 1, 2, 3 } },
    { "centered-exponential", "exponential law shifted to mean zero", { 1 } },
    { "skewed-triangle", "right-triangle law shifted to mean zero", { 1 } },
    { "logistic", "logistic law (smooth, symmetric)", { 1 } },
    { "product", "independent 1-d coordinates (components: [a, b])", { 2 } },
    { "unbounded-marginal",
      "uniform law on {|x1| <= exp(-c|x2|)}; unbounded marginal",
      { 2 } },
  };
}

const FamilyCatalog&
FamilyCatalog::instance()
{
  static const FamilyCatalog catalog;
  return catalog;
}

bool
FamilyCatalog::contains(std::string_view id) const
{
  return std::any_of(
    infos_.begin(), infos_.end(), [&](const auto& f) { return f.id == id; });
}

DistributionSpec
FamilyCatalog::make(const FamilyParams& params) const
{
  const auto& id = params.id;
  auto one_dim = [&]() {
    if (params.dim != 1)
      throw UnsupportedDimension(id + " is only defined for d = 1");
  };
  if (id == "uniform") {
    one_dim();
    return make_uniform_interval(params.sigma);
  }
  if (id == "uniform-ball")
    return make_uniform_ball(params.dim, params.sigma);
  if (id == "gaussian")
    return make_gaussian(params.dim, params.sigma);
  if (id == "centered-exponential" || id == "skewed-triangle") {
    one_dim();
    return make_asymmetric_family(id, params.sigma);
  }
  if (id == "logistic") {
    one_dim();
    return make_logistic(params.sigma);
  }
  if (id == "product") {
    if (params.dim != 2)
      throw UnsupportedDimension("product is only defined for d = 2");
    if (params.components.size() != 2)
      throw ParameterError("product needs exactly two component ids");
    std::vector<DistributionSpec> parts;
    for (const auto& cid : params.components) {
      if (cid == "product" || cid == "unbounded-marginal" || !contains(cid))
        throw ParameterError("invalid product component '" + cid + "'");
      FamilyParams sub{ cid, 1, params.sigma, {}, {} };
      parts.push_back(make(sub));
    }
    return make_product(parts);
  }
  if (id == "unbounded-marginal") {
    if (params.dim != 2)
      throw UnsupportedDimension("unbounded-marginal is only defined for d = 2");
    // A custom c gives an anisotropic law, which is left at its native scale.
    if (params.c)
      return make_unbounded_marginal_example(*params.c);
    auto base = make_unbounded_marginal_example(isotropic_unbounded_marginal_c());
    return scaled(base, params.sigma / base.sigma());
  }
  throw ParameterError("unknown family id '" + id + "'");
}

std::vector<DistributionSpec>
standard_catalog()
{
  std::vector<DistributionSpec> out;
  out.push_back(make_uniform_interval(1.0));
  out.push_back(make_gaussian(1, 1.0));
  out.push_back(make_asymmetric_family(AsymmetricKind::centered_exponential, 1.0));
  out.push_back(make_asymmetric_family(AsymmetricKind::skewed_triangle, 1.0));
  out.push_back(make_logistic(1.0));
  out.push_back(make_uniform_ball(2, 1.0));
  out.push_back(make_gaussian(2, 1.0));
  out.push_back(make_product({ make_uniform_interval(1.0), make_logistic(1.0) }));
  out.push_back(make_product(
    { make_uniform_interval(1.0),
      make_asymmetric_family(AsymmetricKind::centered_exponential, 1.0) }));
  out.push_back(make_unbounded_marginal_example(isotropic_unbounded_marginal_c()));
  out.push_back(make_uniform_ball(3, 1.0));
  out.push_back(make_gaussian(3, 1.0));
  return out;
}

} // namespace llt
