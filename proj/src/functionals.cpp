#include "llt/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <boost/math/tools/minima.hpp>

#include "llt/errors.hpp"
#include "llt/numerics.hpp"

namespace llt {

namespace {

//! Maximizes g on [a, b] starting from a bracketing sample.
std::pair<double, double>
refine_max_1d(const std::function<double(double)>& g, double a, double b)
{
  auto neg = [&](double x) { return -g(x); };
  auto r = boost::math::tools::brent_find_minima(neg, a, b, 50);
  return { r.first, -r.second };
}

//! Scans g on [lo, hi] with `samples` points, then refines around the best
//! sample.
double
scan_max_1d(const std::function<double(double)>& g,
            double lo,
            double hi,
            int samples,
            std::span<const double> extra_points = {})
{
  const double step = (hi - lo) / (samples - 1);
  double best_x = lo, best = -INFINITY;
  for (int i = 0; i < samples; ++i) {
    const double x = lo + i * step;
    const double v = g(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  // One-sided limits at jumps can exceed every sampled value.
  for (double b : extra_points)
    for (double x : { b - 1e-12 * (1.0 + std::abs(b)), b + 1e-12 * (1.0 + std::abs(b)) }) {
      const double v = g(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
  const auto r = refine_max_1d(
    g, std::max(lo, best_x - step), std::min(hi, best_x + step));
  return std::max(best, r.second);
}

double
grid_max_density(const DistributionSpec& dist)
{
  if (dist.dim == 1) {
    auto g = [&](double x) {
      std::array<double, 1> p{ x };
      return dist.density(p);
    };
    return scan_max_1d(g, dist.lo, dist.hi, 20001, dist.breakpoints);
  }
  const int dim = dist.dim;
  const int per_axis = dim == 2 ? 401 : 81;
  const double lo = dist.lo, hi = dist.hi;
  const double step = (hi - lo) / (per_axis - 1);
  long long total = 1;
  for (int a = 0; a < dim; ++a)
    total *= per_axis;
  std::array<double, 3> x{}, best_x{};
  double best = -INFINITY;
  for (long long flat = 0; flat < total; ++flat) {
    long long rem = flat;
    for (int a = dim - 1; a >= 0; --a) {
      x[a] = lo + (rem % per_axis) * step;
      rem /= per_axis;
    }
    const double v = dist.density(Point(x.data(), dim));
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  // Coordinate ascent around the best node.
  for (int sweep = 0; sweep < 4; ++sweep)
    for (int a = 0; a < dim; ++a) {
      auto g = [&](double s) {
        auto y = best_x;
        y[a] = s;
        return dist.density(Point(y.data(), dim));
      };
      const auto r = refine_max_1d(g, best_x[a] - step, best_x[a] + step);
      if (r.second > best) {
        best = r.second;
        best_x[a] = r.first;
      }
    }
  return best;
}

void
require_unit(Point theta, int dim)
{
  if (static_cast<int>(theta.size()) != dim)
    throw ParameterError("direction has the wrong dimension");
  double r2 = 0.0;
  for (double v : theta)
    r2 += v * v;
  if (std::abs(r2 - 1.0) > 1e-9)
    throw ParameterError("direction must be a unit vector");
}

std::vector<double>
normalized(std::vector<double> v)
{
  double r = 0.0;
  for (double x : v)
    r += x * x;
  r = std::sqrt(r);
  for (double& x : v)
    x /= r;
  return v;
}

} // namespace

double
max_density(const DistributionSpec& dist)
{
  if (dist.max_density_closed_form)
    return *dist.max_density_closed_form;
  return grid_max_density(dist);
}

double
marginal_max_density(const DistributionSpec& dist, Point theta)
{
  require_unit(theta, dist.dim);
  if (!dist.bounded_projections)
    throw UnboundedDensity("the projection of " + dist.name +
                           " has an unbounded density");
  if (dist.dim == 1)
    return max_density(dist);
  const double r = dist.extent();
  std::vector<double> th(theta.begin(), theta.end());
  auto g = [&](double s) { return projected_density(dist, th, s); };
  return scan_max_1d(g, -r, r, 801);
}

double
beta_p_directional(const std::vector<DistributionSpec>& dists,
                   long long n,
                   Point theta,
                   int p)
{
  if (p != 3 && p != 4)
    throw UnsupportedOrder("beta_p is defined here for p = 3 and p = 4 only");
  if (dists.empty() || n < 1)
    throw ParameterError("beta_p needs at least one summand");
  require_unit(theta, dists.front().dim);
  const long long m = static_cast<long long>(dists.size());
  double total = 0.0;
  for (long long i = 0; i < std::min(m, n); ++i) {
    if (dists[i].dim != dists.front().dim)
      throw ParameterError("dimension mismatch among summands");
    const long long count = n / m + (i < n % m ? 1 : 0);
    total += count * dists[i].abs_moment(theta, p);
  }
  return total / static_cast<double>(n);
}

std::vector<std::vector<double>>
sphere_directions(int dim, int count)
{
  std::vector<std::vector<double>> out;
  if (dim == 1)
    return { { 1.0 }, { -1.0 } };
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * num::pi * i / count;
      out.push_back({ std::cos(a), std::sin(a) });
    }
    return out;
  }
  if (dim == 3) {
    const double golden = num::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * i;
      out.push_back({ rho * std::cos(a), rho * std::sin(a), z });
    }
    return out;
  }
  throw UnsupportedDimension("sphere scans support d <= 3");
}

DirectionalSup
beta_p_sup(const std::vector<DistributionSpec>& dists, long long n, int p)
{
  if (dists.empty())
    throw ParameterError("beta_p needs at least one summand");
  const int dim = dists.front().dim;
  auto eval = [&](const std::vector<double>& th) {
    return beta_p_directional(dists, n, th, p);
  };
  DirectionalSup out;
  if (dim == 1) {
    const double plus = eval({ 1.0 }), minus = eval({ -1.0 });
    out.value = out.lattice = std::max(plus, minus);
    out.theta = { plus >= minus ? 1.0 : -1.0 };
    return out;
  }
  if (dim == 2) {
    // |<theta, x>|^p is even in theta, so half the circle suffices.
    const int count = 512;
    const double da = num::pi / count;
    double best_a = 0.0, best = -INFINITY;
    for (int i = 0; i < count; ++i) {
      const double a = i * da;
      const double v = eval({ std::cos(a), std::sin(a) });
      if (v > best) {
        best = v;
        best_a = a;
      }
    }
    out.lattice = best;
    auto g = [&](double a) { return eval({ std::cos(a), std::sin(a) }); };
    const auto r = refine_max_1d(g, best_a - da, best_a + da);
    if (r.second > best) {
      best = r.second;
      best_a = r.first;
    }
    out.value = best;
    out.theta = { std::cos(best_a), std::sin(best_a) };
    return out;
  }
  if (dim != 3)
    throw UnsupportedDimension("beta_p_sup supports d <= 3");
  const auto dirs = sphere_directions(3, 1024);
  std::vector<double> best_th;
  double best = -INFINITY;
  for (const auto& th : dirs) {
    const double v = eval(th);
    if (v > best) {
      best = v;
      best_th = th;
    }
  }
  out.lattice = best;
  // Pattern search in the tangent plane, shrinking the step on failure.
  double step = std::sqrt(4.0 * num::pi / dirs.size());
  while (step > 1e-7) {
    std::array<double, 3> u{}, w{};
    const auto& c = best_th;
    const std::array<double, 3> ref =
      std::abs(c[2]) < 0.9 ? std::array<double, 3>{ 0, 0, 1 }
                           : std::array<double, 3>{ 1, 0, 0 };
    u = { ref[1] * c[2] - ref[2] * c[1],
          ref[2] * c[0] - ref[0] * c[2],
          ref[0] * c[1] - ref[1] * c[0] };
    const double un = std::hypot(u[0], u[1], u[2]);
    for (double& v : u)
      v /= un;
    w = { c[1] * u[2] - c[2] * u[1],
          c[2] * u[0] - c[0] * u[2],
          c[0] * u[1] - c[1] * u[0] };
    bool improved = false;
    for (const auto& dir : { u, w })
      for (double sgn : { 1.0, -1.0 }) {
        auto cand = normalized({ c[0] + sgn * step * dir[0],
                                 c[1] + sgn * step * dir[1],
                                 c[2] + sgn * step * dir[2] });
        const double v = eval(cand);
        if (v > best) {
          best = v;
          best_th = cand;
          improved = true;
        }
      }
    if (!improved)
      step *= 0.5;
  }
  out.value = best;
  out.theta = best_th;
  return out;
}

double
lyapunov_L(const std::vector<DistributionSpec>& dists, long long n, int p)
{
  const double beta = beta_p_sup(dists, n, p).value;
  return std::pow(static_cast<double>(n), -(p - 2) / 2.0) * beta;
}

double
ball_volume(int d)
{
  if (d < 1)
    throw ParameterError("dimension must be >= 1");
  return num::unit_ball_volume(d);
}

IsotropyMargins
check_isotropic_bounds(const DistributionSpec& dist)
{
  const int d = dist.dim;
  const double M = max_density(dist);
  const double s2 = dist.sigma2;
  const double a = std::pow(M, 2.0 / d) * s2;
  IsotropyMargins out;
  if (d == 1)
    out.interval = M * M * s2 - 1.0 / 12.0;
  out.ball = a - std::pow(ball_volume(d), -2.0 / d) / (d + 2.0);
  out.gaussian = a - 1.0 / (2.0 * num::pi * num::e);
  return out;
}

FunctionalReport
functional_report(const std::vector<DistributionSpec>& dists, long long n)
{
  if (dists.empty())
    throw ParameterError("functional report needs at least one summand");
  FunctionalReport r;
  r.dim = dists.front().dim;
  r.n = n;
  r.third_moments_vanish = true;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    r.third_moments_vanish = r.third_moments_vanish && dists[i].third_moments_vanish;
    r.family += (i ? "+" : "") + dists[i].name;
    r.M = std::max(r.M, max_density(dists[i]));
    r.sigma = std::max(r.sigma, dists[i].sigma());
  }
  const auto b3 = beta_p_sup(dists, n, 3);
  const auto b4 = beta_p_sup(dists, n, 4);
  r.beta3 = b3.value;
  r.beta3_lattice = b3.lattice;
  r.theta_star3 = b3.theta;
  r.beta4 = b4.value;
  r.beta4_lattice = b4.lattice;
  r.theta_star4 = b4.theta;
  r.isotropic_const = std::pow(r.M, 1.0 / r.dim) * r.sigma;
  r.L3 = r.beta3 / std::sqrt(static_cast<double>(n));
  r.L4 = r.beta4 / static_cast<double>(n);
  return r;
}

} // namespace llt
