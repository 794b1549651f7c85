#include "llt/cf_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

#include "llt/errors.hpp"
#include "llt/functionals.hpp"
#include "llt/grid.hpp"
#include "llt/numerics.hpp"

namespace llt {

using num::pi;

namespace {

double
abs_cf(const DistributionSpec& dist, Point t)
{
  return std::abs(dist.cf(t));
}

//! Unwraps scaled() to its base law and the scale factor.
std::pair<const DistributionSpec*, double>
unscaled(const DistributionSpec& dist)
{
  const DistributionSpec* d = &dist;
  double lambda = 1.0;
  while (d->family == FamilyId::scaled && !d->components.empty()) {
    const auto* base = d->components.front().get();
    lambda *= std::sqrt(d->sigma2 / base->sigma2);
    d = base;
  }
  return { d, lambda };
}

//! int_{r_min}^inf w(r) g(r) dr over a first segment and then dyadic shells
//! [R, 2R], each integrated with panels short enough to resolve
//! oscillations of frequency `osc`. The remainder after the last shell is
//! extrapolated from the last two shells.
double
shell_integral(const std::function<double(double)>& g,
               double r_min,
               double first,
               double osc)
{
  auto segment = [&](double a, double b) {
    const double want = std::ceil(2.0 * (b - a) * osc / pi) + 4.0;
    const int pieces = static_cast<int>(std::min(want, 4.0e5));
    return num::integrate_fixed(g, a, b, {}, pieces, 10);
  };
  double total = 0.0;
  double R = std::max(first, 2.0 * r_min);
  if (R > r_min)
    total += segment(r_min, R);
  else
    R = r_min;
  double prev = -1.0;
  for (int k = 0; k < 14; ++k) {
    const double shell = segment(R, 2.0 * R);
    total += shell;
    R *= 2.0;
    if (shell <= 1e-17 * total)
      return total;
    if (k >= 1 && (k == 13 || R * osc > 2.0e5)) {
      const auto tail = num::dyadic_tail(prev, shell, 0.0);
      if (!tail.integrable)
        throw InsufficientWindow(
          "|f|^p decays too slowly to be integrable");
      return total + tail.tail;
    }
    prev = shell;
  }
  return total;
}

double
radial_power_integral(const DistributionSpec& dist, double power, double r_min)
{
  const int d = dist.dim;
  const double osc = dist.support_radius.value_or(dist.extent());
  std::array<double, 3> t{};
  auto g = [&](double r) {
    t[0] = r;
    const double v = std::pow(abs_cf(dist, Point(t.data(), d)), power);
    return d == 1 ? v : v * std::pow(r, d - 1);
  };
  const double factor = d == 1 ? 2.0 : num::unit_sphere_area(d);
  return factor * shell_integral(g, r_min, 4.0 / dist.sigma(), osc);
}

//! int_{|t| < rho} |f|^power in the plane, polar coordinates.
double
disk_power_integral(const DistributionSpec& dist, double power, double rho)
{
  const double osc = dist.extent();
  const int angles =
    std::max(64, 4 * static_cast<int>(std::ceil(rho * osc / pi)));
  const int pieces = std::max(4, static_cast<int>(std::ceil(2.0 * rho * osc / pi)));
  double total = 0.0;
  for (int j = 0; j < angles; ++j) {
    const double a = 2.0 * pi * j / angles;
    const double c = std::cos(a), s = std::sin(a);
    total += num::integrate_fixed(
      [&](double r) {
        std::array<double, 2> t{ r * c, r * s };
        return r * std::pow(abs_cf(dist, t), power);
      },
      0.0,
      rho,
      {},
      pieces,
      10);
  }
  return total * 2.0 * pi / angles;
}

double
grid_power_integral(const DistributionSpec& dist, double power, double r_min)
{
  GridSpec spec;
  spec.dim = dist.dim;
  // Riemann sums of |f|^p over a step pi/L are exact up to aliasing
  // from |x| > L of the autocorrelation, so L must cover the support.
  spec.half_width = std::max(1.25 * dist.extent(), 12.0 * dist.sigma());
  spec.points_per_axis = dist.dim == 2 ? 512 : 128;
  const auto cf = cf_on_grid(dist, spec);
  const double T = spec.t_max();
  const long long n = spec.points_per_axis;
  double sum = 0.0;
  std::array<double, 3> t{};
  for (long long flat = 0; flat < spec.size(); ++flat) {
    long long rem = flat;
    double r2 = 0.0;
    for (int a = spec.dim - 1; a >= 0; --a) {
      t[a] = spec.t(rem % n);
      r2 += t[a] * t[a];
      rem /= n;
    }
    const double r = std::sqrt(r2);
    if (r >= r_min && r < T)
      sum += std::pow(std::abs(cf.values[flat]), power);
  }
  const double cell = std::pow(spec.freq_step(), spec.dim);
  const auto tail = estimate_window_tail(cf, power);
  if (!tail.integrable)
    throw InsufficientWindow("|f|^p decays too slowly to be integrable");
  // estimate_window_tail carries the (2 pi)^{-d} factor.
  return sum * cell + tail.tail * std::pow(2.0 * pi, spec.dim);
}

} // namespace

double
cf_power_integral(const DistributionSpec& dist, double power, double r_min)
{
  if (!(power > 0.0))
    throw ParameterError("power must be positive");
  r_min = std::max(r_min, 0.0);
  const auto [base, lambda] = unscaled(dist);
  if (lambda != 1.0)
    return std::pow(lambda, -base->dim) *
           cf_power_integral(*base, power, lambda * r_min);
  if (dist.dim == 1 || (dist.rotation_invariant && dist.has_closed_form_cf()))
    return radial_power_integral(dist, power, r_min);
  if (dist.family == FamilyId::product && dist.components.size() == 2) {
    double total = 1.0;
    for (const auto& c : dist.components)
      total *= cf_power_integral(*c, power, 0.0);
    if (r_min > 0.0)
      total -= disk_power_integral(dist, power, r_min);
    return std::max(total, 0.0);
  }
  return grid_power_integral(dist, power, r_min);
}

double
cf_power_tail_bound(const DistributionSpec& dist, double power, double r_min)
{
  const auto [base, lambda] = unscaled(dist);
  if (lambda != 1.0)
    return std::pow(lambda, -base->dim) *
           cf_power_tail_bound(*base, power, lambda * r_min);
  if (dist.family == FamilyId::product && dist.components.size() == 2 &&
      r_min > 0.0) {
    // |t| >= r forces |t1| or |t2| >= r / sqrt(2).
    const auto& a = *dist.components[0];
    const auto& b = *dist.components[1];
    const double cut = r_min / std::sqrt(2.0);
    return cf_power_integral(a, power, cut) * cf_power_integral(b, power, 0.0) +
           cf_power_integral(a, power, 0.0) * cf_power_integral(b, power, cut);
  }
  return cf_power_integral(dist, power, r_min);
}

double
lp_norm_cf(const DistributionSpec& dist, int m)
{
  if (m < 1)
    throw ParameterError("m must be >= 1");
  return cf_power_integral(dist, 2.0 * m, 0.0) / std::pow(2.0 * pi, dist.dim);
}

double
lp_norm_envelope(const DistributionSpec& dist, int m)
{
  return std::pow(num::e / (2.0 * m), 0.5 * dist.dim) * max_density(dist);
}

double
tail_integral_cf(const DistributionSpec& dist, double eps, int n)
{
  if (n < 2)
    throw ParameterError("tail integrals need n >= 2");
  if (eps < 0.0)
    throw ParameterError("eps must be non-negative");
  return cf_power_integral(dist, n, eps);
}

double
tail_envelope(const DistributionSpec& dist, double eps, int n, double c)
{
  const int d = dist.dim;
  const double M = max_density(dist);
  const double s2 = dist.sigma2;
  const double expo = std::pow(c, d) * n * std::min(s2 * eps * eps, 1.0) /
                      (M * M * std::pow(s2, d));
  return std::pow(8.0 * pi * pi * num::e / n, 0.5 * d) * M * std::exp(-expo);
}

DistributionSpec
symmetrize(const DistributionSpec& dist)
{
  auto base = std::make_shared<const DistributionSpec>(dist);
  DistributionSpec d;
  d.family = FamilyId::symmetrized;
  d.name = "sym(" + dist.name + ")";
  d.dim = dist.dim;
  d.sigma2 = 2.0 * dist.sigma2;
  d.symmetric = true;
  d.third_moments_vanish = true;
  d.log_concave = dist.log_concave;
  d.rotation_invariant = dist.rotation_invariant;
  d.bounded_projections = dist.bounded_projections;
  if (dist.support_radius)
    d.support_radius = 2.0 * *dist.support_radius;
  const double width = dist.hi - dist.lo;
  d.lo = -width;
  d.hi = width;
  d.components = { base };
  d.cf_kind = dist.cf_kind;
  d.cf = [base](Point t) {
    const double a = std::abs(base->cf(t));
    return cplx(a * a, 0.0);
  };

  if (dist.dim == 1) {
    for (double a : dist.breakpoints)
      for (double b : dist.breakpoints)
        d.breakpoints.push_back(a - b);
    std::sort(d.breakpoints.begin(), d.breakpoints.end());
    d.breakpoints.erase(std::unique(d.breakpoints.begin(), d.breakpoints.end()),
                        d.breakpoints.end());
    d.density = [base](Point x) {
      const double s = x[0];
      std::vector<double> br = base->breakpoints;
      for (double b : base->breakpoints)
        br.push_back(b + s);
      const double lo = std::max(base->lo, base->lo + s);
      const double hi = std::min(base->hi, base->hi + s);
      return num::integrate(
        [&](double y) {
          std::array<double, 1> a{ y }, b{ y - s };
          const double pa = base->density(a);
          return pa == 0.0 ? 0.0 : pa * base->density(b);
        },
        lo,
        hi,
        br,
        1e-12);
    };
    d.abs_moment = [base](Point theta, double p) {
      // E|X - X'|^p = int p(y) E|X - y|^p dy
      auto inner = [&](double y) {
        std::vector<double> br = base->breakpoints;
        br.push_back(y);
        return num::integrate_fixed(
          [&](double x) {
            std::array<double, 1> pt{ x };
            return std::pow(std::abs(x - y), p) * base->density(pt);
          },
          base->lo,
          base->hi,
          br,
          12,
          20);
      };
      const double m = num::integrate_fixed(
        [&](double y) {
          std::array<double, 1> pt{ y };
          const double w = base->density(pt);
          return w == 0.0 ? 0.0 : w * inner(y);
        },
        base->lo,
        base->hi,
        base->breakpoints,
        12,
        20);
      return std::pow(std::abs(theta[0]), p) * m;
    };
    d.max_density_closed_form = expect_1d(dist, [&](double y) {
      std::array<double, 1> pt{ y };
      return dist.density(pt);
    });
  } else if (dist.dim == 2) {
    auto nodes = std::make_shared<const std::vector<WeightedNode>>(
      density_nodes(dist, std::numeric_limits<double>::infinity(), 8, 12));
    d.density = [base, nodes](Point x) {
      double s = 0.0;
      for (const auto& nd : *nodes) {
        std::array<double, 2> y{ nd.x[0] - x[0], nd.x[1] - x[1] };
        s += nd.w * base->density(y);
      }
      return s;
    };
    d.abs_moment = [base](Point theta, double p) {
      // Projection of X - X' is the difference of two copies of <theta, X>.
      const double r = base->extent();
      const auto& gl = num::gauss_legendre(16);
      std::vector<double> s, w;
      const int pieces = 24;
      for (int i = 0; i < pieces; ++i) {
        const double a = -r + 2.0 * r * i / pieces, b = a + 2.0 * r / pieces;
        for (int q = 0; q < 16; ++q) {
          const double x = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
          s.push_back(x);
          w.push_back(0.5 * (b - a) * gl.weights[q] * projected_density(*base, theta, x));
        }
      }
      double m = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
          m += w[i] * w[j] * std::pow(std::abs(s[i] - s[j]), p);
      return m;
    };
    // int p^2 needs a finer rule than the convolution above.
    double sq = 0.0;
    for (const auto& nd : density_nodes(dist, std::numeric_limits<double>::infinity(), 48, 16))
      sq += nd.w * dist.density(Point(nd.x.data(), 2));
    d.max_density_closed_form = sq;
  } else {
    d.density = [](Point) -> double {
      throw UnsupportedDimension("symmetrized densities need d <= 2");
    };
    d.abs_moment = [](Point, double) -> double {
      throw UnsupportedDimension("symmetrized moments need d <= 2");
    };
    d.max_density_closed_form = lp_norm_cf(dist, 1);
  }
  const double m_base = max_density(dist);
  if (*d.max_density_closed_form > m_base * (1.0 + 1e-6))
    throw Error("symmetrization increased the maximal density of " + dist.name);
  return d;
}

SeparationReport
separation_scan(const DistributionSpec& dist,
                double eps,
                double t_max,
                int resolution)
{
  if (!(eps > 0.0))
    throw ParameterError("eps must be positive");
  if (resolution < 1)
    throw ParameterError("resolution must be >= 1");
  const int d = dist.dim;
  const double sigma = dist.sigma();
  const double M = max_density(dist);
  if (!std::isfinite(M))
    throw UnboundedDensity(dist.name + " has an unbounded density");
  if (!(t_max > 0.0))
    t_max = 40.0 / sigma;
  if (!(t_max > eps))
    throw WindowError("scan window must exceed eps");

  SeparationReport rep;
  rep.family = dist.name;
  rep.dim = d;
  rep.eps = eps;
  rep.window = t_max;

  const int radial = (d == 1 ? 4096 : 128) * resolution;
  std::vector<double> radii;
  for (int i = 0; i < radial; ++i) {
    radii.push_back(eps + (t_max - eps) * i / (radial - 1));
    radii.push_back(eps * std::pow(t_max / eps, static_cast<double>(i) / (radial - 1)));
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  std::vector<std::vector<double>> dirs;
  if (d == 1) {
    dirs = { { 1.0 } };
  } else if (d == 2) {
    const int count = 64 * resolution;
    for (int j = 0; j < count; ++j) {
      const double a = pi * j / count;
      dirs.push_back({ std::cos(a), std::sin(a) });
    }
  } else {
    dirs = sphere_directions(3, 256 * resolution);
  }

  const double scale = M * M * std::pow(sigma, 2.0 * d);
  double inf_ratio = INFINITY, inf_far = INFINITY, outer_max = 0.0;
  std::array<double, 3> t{};
  for (const auto& th : dirs)
    for (double r : radii) {
      for (int a = 0; a < d; ++a)
        t[a] = r * th[a];
      const double v = abs_cf(dist, Point(t.data(), d));
      ++rep.points;
      if (v > rep.delta_f)
        rep.delta_f = v;
      if (r >= 0.95 * t_max)
        outer_max = std::max(outer_max, v);
      const double ratio =
        (1.0 - v) * scale / std::min(sigma * sigma * r * r, 1.0);
      if (ratio < inf_ratio) {
        inf_ratio = ratio;
        rep.t_critical.assign(t.begin(), t.begin() + d);
      }
      if (sigma * r >= 0.25)
        inf_far = std::min(inf_far, ratio);
    }
  rep.c_empirical = std::pow(std::max(inf_ratio, 0.0), 1.0 / d);
  rep.c_far = std::isfinite(inf_far) ? std::pow(std::max(inf_far, 0.0), 1.0 / d) : 0.0;
  rep.window_warning = outer_max > 0.5 * rep.delta_f;

  // If |f(t0)| = a for some |t0| >= T then |f| >= (1 - k) a on the ball of
  // radius k a / Lip around t0, with Lip = E|X| <= sigma sqrt(d). That ball
  // lies in |t| >= T/2 and carries ((1 - k) a)^{2m} omega_d (k a / Lip)^d of
  // int |f|^{2m}, which bounds a.
  const double lip = sigma * std::sqrt(static_cast<double>(d));
  rep.beyond_window_bound = INFINITY;
  for (int m : { 1, 2, 4, 8 }) {
    double tail = 0.0;
    try {
      tail = cf_power_tail_bound(dist, 2.0 * m, 0.5 * t_max);
    } catch (const WindowError&) {
      continue;
    }
    for (double k : { 0.5, 0.25, 0.1, 0.05 }) {
      const double a =
        std::pow(tail * std::pow(lip, d) /
                   (num::unit_ball_volume(d) * std::pow(k, d) *
                    std::pow(1.0 - k, 2.0 * m)),
                 1.0 / (2.0 * m + d));
      if (k * a / lip <= 0.5 * t_max)
        rep.beyond_window_bound = std::min(rep.beyond_window_bound, a);
    }
  }
  rep.certified = rep.beyond_window_bound <= rep.delta_f;
  return rep;
}

TruncatedSpec
truncate(const DistributionSpec& dist, double r, int directions)
{
  const int d = dist.dim;
  TruncatedSpec out;
  out.base = dist;
  if (!(r > 0.0)) {
    if (d < 2)
      throw ParameterError("the default truncation radius needs d >= 2; pass r");
    r = dist.sigma() * std::sqrt(2.0 * d);
    out.default_radius = true;
  }
  out.r = r;
  auto raw = density_nodes(dist, r, 8, 12);
  double mass = 0.0;
  for (const auto& nd : raw)
    mass += nd.w;
  out.b_r = mass;
  if (mass < 0.1)
    throw DegenerateTruncation("P(|X| < r) = " + std::to_string(mass) +
                               " is below 0.1");
  for (auto& nd : raw)
    nd.w /= mass;
  auto nodes = std::make_shared<const std::vector<WeightedNode>>(std::move(raw));

  std::array<double, 3> mean{};
  std::array<std::array<double, 3>, 3> second{};
  for (const auto& nd : *nodes)
    for (int a = 0; a < d; ++a) {
      mean[a] += nd.w * nd.x[a];
      for (int b = 0; b < d; ++b)
        second[a][b] += nd.w * nd.x[a] * nd.x[b];
    }
  std::array<std::array<double, 3>, 3> cov{};
  double trace = 0.0;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b)
      cov[a][b] = second[a][b] - mean[a] * mean[b];
    trace += cov[a][a];
  }

  auto base = std::make_shared<const DistributionSpec>(dist);
  DistributionSpec& s = out.spec;
  s.family = FamilyId::truncated;
  s.name = dist.name + "|r";
  s.dim = d;
  s.sigma2 = trace / d;
  s.symmetric = dist.symmetric;
  s.third_moments_vanish = dist.third_moments_vanish;
  s.log_concave = dist.log_concave;
  s.rotation_invariant = dist.rotation_invariant;
  s.bounded_projections = true;
  s.support_radius = r;
  s.lo = -r;
  s.hi = r;
  if (d == 1) {
    s.lo = std::max(-r, dist.lo);
    s.hi = std::min(r, dist.hi);
    s.breakpoints = { s.lo, s.hi };
    for (double b : dist.breakpoints)
      if (b > s.lo && b < s.hi)
        s.breakpoints.push_back(b);
    std::sort(s.breakpoints.begin(), s.breakpoints.end());
  }
  s.components = { base };
  const double b_r = mass;
  s.density = [base, r, b_r](Point x) {
    double q = 0.0;
    for (double v : x)
      q += v * v;
    return q < r * r ? base->density(x) / b_r : 0.0;
  };
  s.cf_kind = CfKind::quadrature;
  s.cf = [nodes, d](Point t) {
    double re = 0.0, im = 0.0;
    for (const auto& nd : *nodes) {
      double phase = 0.0;
      for (int a = 0; a < d; ++a)
        phase += t[a] * nd.x[a];
      re += nd.w * std::cos(phase);
      im += nd.w * std::sin(phase);
    }
    return cplx(re, im);
  };
  s.abs_moment = [nodes, d](Point theta, double p) {
    double m = 0.0;
    for (const auto& nd : *nodes) {
      double proj = 0.0;
      for (int a = 0; a < d; ++a)
        proj += theta[a] * nd.x[a];
      m += nd.w * std::pow(std::abs(proj), p);
    }
    return m;
  };
  s.line_breaks = [base, r](Point o, Point u) {
    auto out = line_breaks(*base, o, u);
    double ou = 0.0, oo = 0.0;
    for (std::size_t i = 0; i < o.size(); ++i) {
      ou += o[i] * u[i];
      oo += o[i] * o[i];
    }
    const double disc = ou * ou - (oo - r * r);
    if (disc > 0.0) {
      out.push_back(-ou - std::sqrt(disc));
      out.push_back(-ou + std::sqrt(disc));
    }
    return out;
  };

  if (d == 1) {
    out.directions = { { 1.0 } };
  } else if (d == 2) {
    for (int j = 0; j < directions; ++j) {
      const double a = pi * j / directions;
      out.directions.push_back({ std::cos(a), std::sin(a) });
    }
  } else {
    out.directions = sphere_directions(d, directions);
  }
  const double M = max_density(dist);
  out.marginal_M_bound =
    2.0 * num::unit_ball_volume(d - 1) * std::pow(r, d - 1) * M;
  for (const auto& th : out.directions) {
    double v = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        v += th[a] * cov[a][b] * th[b];
    out.variances.push_back(v);
    out.max_variance = std::max(out.max_variance, v);
    const double mm = marginal_max_density(s, th);
    out.marginal_max.push_back(mm);
    out.max_marginal = std::max(out.max_marginal, mm);
  }
  out.variance_bound_ok = out.max_variance <= 4.0 * dist.sigma2 * (1.0 + 1e-9);
  out.marginal_bound_ok = out.max_marginal <= out.marginal_M_bound * (1.0 + 1e-9);
  out.mass_ok = !out.default_radius || out.b_r >= 0.5;
  return out;
}

RelationCheck
truncation_relation_check(const TruncatedSpec& trunc, double window, int samples)
{
  if (!(window > 0.0) || samples < 1)
    throw ParameterError("relation check needs a positive window and samples");
  RelationCheck out;
  out.min_margin = INFINITY;
  const int d = trunc.base.dim;
  std::array<double, 3> t{};
  for (const auto& th : trunc.directions)
    for (int i = 1; i <= samples; ++i) {
      const double s = window * i / samples;
      for (int a = 0; a < d; ++a)
        t[a] = s * th[a];
      const double g = abs_cf(trunc.base, Point(t.data(), d));
      const double gr = abs_cf(trunc.spec, Point(t.data(), d));
      const double margin = (1.0 - g * g) - 0.5 * (1.0 - gr * gr);
      out.min_margin = std::min(out.min_margin, margin);
      ++out.points;
      if (margin < -1e-9)
        ++out.violations;
    }
  return out;
}

} // namespace llt
