#include "llt/numerics.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace llt::num {

namespace {

std::mutex&
fftw_planner_mutex()
{
  static std::mutex m;
  return m;
}

GaussLegendre
build_gauss_legendre(int n)
{
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev guess refined by Newton on P_n.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    gl.nodes[i] = x;
    gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

} // namespace

const GaussLegendre&
gauss_legendre(int n)
{
  static std::mutex m;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[n];
  if (!slot)
    slot = std::make_unique<GaussLegendre>(build_gauss_legendre(n));
  return *slot;
}

bool
is_power_of_two(long long n)
{
  return n > 0 && (n & (n - 1)) == 0;
}

double
unit_ball_volume(int d)
{
  return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double
unit_sphere_area(int d)
{
  return d * unit_ball_volume(d);
}

double
ball_cf_radial(int d, double u)
{
  u = std::abs(u);
  const double u2 = u * u;
  if (u < 1e-3) {
    // 1 - u^2/(2(d+2)) + u^4/(8(d+2)(d+4))
    return 1.0 - u2 / (2.0 * (d + 2)) + u2 * u2 / (8.0 * (d + 2) * (d + 4));
  }
  switch (d) {
    case 1:
      return std::sin(u) / u;
    case 2:
      return 2.0 * std::cyl_bessel_j(1.0, u) / u;
    case 3:
      return 3.0 * (std::sin(u) - u * std::cos(u)) / (u2 * u);
    default:
      return std::tgamma(0.5 * d + 1.0) * std::pow(2.0 / u, 0.5 * d) *
             std::cyl_bessel_j(0.5 * d, u);
  }
}

double
gaussian_abs_moment(double p)
{
  return std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (p + 1.0)) / std::sqrt(pi);
}

ParabolicPeak
parabolic_peak(double ym, double y0, double yp)
{
  const double curv = ym - 2.0 * y0 + yp;
  if (!(curv < 0.0))
    return { 0.0, y0 };
  const double offset = 0.5 * (ym - yp) / curv;
  if (std::abs(offset) > 1.0)
    return { 0.0, y0 };
  return { offset, y0 - 0.125 * (yp - ym) * (yp - ym) / curv };
}

TailEstimate
dyadic_tail(double inner_shell, double outer_shell, double negligible)
{
  if (outer_shell <= negligible)
    return { std::max(outer_shell, 0.0), true };
  const double ratio = inner_shell / outer_shell;
  // A ratio near 1 means the integrand decays no faster than |t|^{-d}.
  if (ratio <= 1.0 + 1e-3)
    return { INFINITY, false };
  return { outer_shell / (ratio - 1.0), true };
}

cplx
ipow(cplx z, long long n)
{
  cplx result{ 1.0, 0.0 };
  while (n > 0) {
    if (n & 1)
      result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

void
fft_inplace(std::vector<cplx>& data, int dim, int n, int sign)
{
  std::vector<int> dims(dim, n);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft(dim,
                         dims.data(),
                         ptr,
                         ptr,
                         sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                         FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

LineFit
fit_line(std::span<const double> x, std::span<const double> y)
{
  const std::size_t n = x.size();
  LineFit fit;
  if (n < 2)
    return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.rms = std::sqrt(rss / n);
  if (n > 2)
    fit.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
  return fit;
}

} // namespace llt::num
