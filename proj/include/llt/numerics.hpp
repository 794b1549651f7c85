#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace llt::num {

constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

using cplx = std::complex<double>;

//! Adaptive Gauss-Kronrod (7/15) over [a, b], split at the given interior
//! breakpoints so that each piece has a smooth integrand.
template<class F>
double
integrate(F&& f,
          double a,
          double b,
          std::span<const double> breaks = {},
          double tol = 1e-12,
          unsigned max_depth = 15)
{
  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (!(b > a))
    return 0.0;
  std::vector<double> cuts{ a };
  for (double x : breaks)
    if (x > a && x < b)
      cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i])
      continue;
    total += gk::integrate(f, cuts[i], cuts[i + 1], max_depth, tol);
  }
  return total;
}

//! Gauss-Legendre rule on [-1, 1] with n nodes.
struct GaussLegendre
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int n);

//! Composite Gauss-Legendre over [a, b] with `pieces` equal panels, each
//! additionally split at breakpoints.
template<class F>
double
integrate_fixed(F&& f,
                double a,
                double b,
                std::span<const double> breaks,
                int pieces,
                int order)
{
  if (!(b > a))
    return 0.0;
  const auto& gl = gauss_legendre(order);
  std::vector<double> cuts;
  cuts.reserve(pieces + 1 + breaks.size());
  for (int i = 0; i <= pieces; ++i)
    cuts.push_back(a + (b - a) * i / pieces);
  for (double x : breaks)
    if (x > a && x < b)
      cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi <= lo)
      continue;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q)
      s += gl.weights[q] * f(mid + half * gl.nodes[q]);
    total += half * s;
  }
  return total;
}

bool
is_power_of_two(long long n);

//! Volume of the Euclidean unit ball in R^d.
double
unit_ball_volume(int d);

//! Surface area of the unit sphere S^{d-1}.
double
unit_sphere_area(int d);

//! Characteristic function of the uniform law on the unit ball of R^d,
//! as a function of u = |t|.
double
ball_cf_radial(int d, double u);

//! E|N(0,1)|^p.
double
gaussian_abs_moment(double p);

//! Vertex of the parabola through (-1, ym), (0, y0), (1, yp).
struct ParabolicPeak
{
  double offset = 0.0; // in units of the step, within [-1, 1]
  double value = 0.0;
};

ParabolicPeak
parabolic_peak(double ym, double y0, double yp);

//! Geometric extrapolation of the tail beyond a window from two adjacent
//! dyadic shells I(T/4, T/2) and I(T/2, T) of a power-law decaying
//! integrand.
struct TailEstimate
{
  double tail = 0.0;
  bool integrable = true;
};

TailEstimate
dyadic_tail(double inner_shell, double outer_shell, double negligible = 1e-14);

cplx
ipow(cplx z, long long n);

//! In-place complex FFT on a row-major N^dim array.
//! sign = -1 computes sum_j a_j e^{-2 pi i k j / N}, sign = +1 the conjugate
//! kernel. No normalization is applied.
void
fft_inplace(std::vector<cplx>& data, int dim, int n, int sign);

//! Least-squares line y = a + b x with the standard error of b.
struct LineFit
{
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double rms = 0.0;
};

LineFit
fit_line(std::span<const double> x, std::span<const double> y);

} // namespace llt::num
