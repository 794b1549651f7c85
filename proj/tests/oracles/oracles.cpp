#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace oracle {

namespace {

constexpr long double PI = 3.141592653589793238462643383279502884L;

long double
phi(long double x)
{
  return std::exp(-0.5L * x * x) / std::sqrt(2.0L * PI);
}

long double
binomial(int n, int k)
{
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

long double
logistic_density(long double x)
{
  // Variance one: scale s = sqrt(3) / pi.
  const long double s = std::sqrt(3.0L) / PI;
  const long double c = std::cosh(0.5L * x / s);
  return 1.0L / (4.0L * s * c * c);
}

} // namespace

long double
simpson(const std::function<long double(long double)>& f,
        long double a,
        long double b,
        int intervals)
{
  if (intervals % 2)
    ++intervals;
  const long double h = (b - a) / intervals;
  long double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    s += (i % 2 ? 4.0L : 2.0L) * f(a + i * h);
  return s * h / 3.0L;
}

long double
simpson_pieces(const std::function<long double(long double)>& f,
               const std::vector<long double>& cuts,
               int intervals_per_piece)
{
  long double total = 0.0L;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i])
      total += simpson(f, cuts[i], cuts[i + 1], intervals_per_piece);
  return total;
}

double
uniform_beta3()
{
  return 3.0 * std::sqrt(3.0) / 4.0;
}

double
uniform_beta3_quadrature()
{
  const long double a = std::sqrt(3.0L);
  return static_cast<double>(simpson_pieces(
    [a](long double x) { return std::fabs(x * x * x) / (2.0L * a); }, { -a, 0.0L, a }, 2000));
}

double
gaussian_abs_moment(double p)
{
  return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(M_PI);
}

double
exponential_beta3()
{
  return 12.0 / std::exp(1.0) - 2.0;
}

double
exponential_beta3_quadrature()
{
  auto f = [](long double x) {
    const long double y = std::fabs(x - 1.0L);
    return y * y * y * std::exp(-x);
  };
  return static_cast<double>(simpson_pieces(f, { 0.0L, 1.0L, 10.0L, 80.0L }, 20000));
}

double
skewed_triangle_third_moment()
{
  const long double s = std::sqrt(18.0L);
  auto f = [s](long double y) {
    const long double x = s * (y - 1.0L / 3.0L);
    return x * x * x * 2.0L * (1.0L - y);
  };
  return static_cast<double>(simpson(f, 0.0L, 1.0L, 2000));
}

double
ball_radius_d2()
{
  // E X_1^2 for the unit disk, then scale to unit variance.
  auto radial = [](long double r) {
    auto ang = [r](long double t) { return r * r * std::cos(t) * std::cos(t) * r; };
    return simpson(ang, 0.0L, 2.0L * PI, 400);
  };
  const long double k = simpson(radial, 0.0L, 1.0L, 400) / PI;
  return static_cast<double>(1.0L / std::sqrt(k));
}

namespace {

struct RegionMoments
{
  long double area, x1sq, x2sq, x1x2;
};

RegionMoments
region_moments(long double c)
{
  RegionMoments m{};
  auto inner = [](long double h, auto&& g) {
    return simpson([&](long double x1) { return g(x1); }, -h, h, 40);
  };
  auto outer = [&](auto&& g) {
    // Both halves of the x2 axis.
    const long double top = 50.0L / c;
    return simpson_pieces([&](long double x2) { return g(x2); }, { -top, 0.0L, top }, 4000);
  };
  m.area = outer([&](long double x2) {
    return inner(std::exp(-c * std::fabs(x2)), [](long double) { return 1.0L; });
  });
  m.x1sq = outer([&](long double x2) {
    return inner(std::exp(-c * std::fabs(x2)), [](long double x1) { return x1 * x1; });
  });
  m.x2sq = outer([&](long double x2) {
    return x2 * x2 * inner(std::exp(-c * std::fabs(x2)), [](long double) { return 1.0L; });
  });
  m.x1x2 = outer([&](long double x2) {
    return x2 * inner(std::exp(-c * std::fabs(x2)), [](long double x1) { return x1; });
  });
  m.x1sq /= m.area;
  m.x2sq /= m.area;
  m.x1x2 /= m.area;
  return m;
}

} // namespace

double
region_isotropy_c()
{
  long double lo = 1.0L, hi = 10.0L;
  for (int it = 0; it < 60; ++it) {
    const long double mid = 0.5L * (lo + hi);
    const auto m = region_moments(mid);
    // E X2^2 decreases in c while E X1^2 stays fixed.
    if (m.x2sq > m.x1sq)
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

double
region_cross_moment(double c)
{
  return static_cast<double>(region_moments(c).x1x2);
}

long double
uniform_sum_density(int n, long double x)
{
  if (n > 16)
    throw std::invalid_argument("Irwin-Hall evaluation is limited to n <= 16");
  const long double rn = std::sqrt(static_cast<long double>(n));
  const long double s = rn * x;
  const long double w = 0.5L * (s / std::sqrt(3.0L) + n);
  if (w <= 0.0L || w >= n)
    return 0.0L;
  long double sum = 0.0L, fact = 1.0L;
  for (int i = 2; i < n; ++i)
    fact *= i;
  for (int k = 0; k <= static_cast<int>(std::floor(w)); ++k)
    sum += (k % 2 ? -1.0L : 1.0L) * binomial(n, k) * std::pow(w - k, n - 1);
  return rn * sum / fact / (2.0L * std::sqrt(3.0L));
}

long double
gamma_sum_density(int n, long double x)
{
  const long double rn = std::sqrt(static_cast<long double>(n));
  const long double g = n + rn * x;
  if (g <= 0.0L)
    return 0.0L;
  return rn * std::exp((n - 1) * std::log(g) - g - std::lgamma(static_cast<long double>(n)));
}

double
sup_gap(const std::function<long double(long double)>& p, double a, long long points)
{
  long double best = 0.0L;
  for (long long i = 0; i < points; ++i) {
    const long double x = -a + 2.0L * a * i / (points - 1);
    best = std::max(best, std::fabs(p(x) - phi(x)));
  }
  return static_cast<double>(best);
}

double
uniform_delta(int n)
{
  const double a = std::max(8.0, std::sqrt(3.0 * n) + 1.0);
  return sup_gap([n](long double x) { return uniform_sum_density(n, x); }, a, 1000001);
}

double
exponential_delta(int n)
{
  return sup_gap([n](long double x) { return gamma_sum_density(n, x); },
                 std::max(14.0, std::sqrt(static_cast<double>(n)) + 1.0), 2000001);
}

double
triangle_peak()
{
  return static_cast<double>(uniform_sum_density(2, 0.0L));
}

double
uniform_gaussian_conv_max()
{
  // The convolution is symmetric and unimodal, so the maximum is at 0.
  const long double a = std::sqrt(3.0L);
  return static_cast<double>(
    simpson([a](long double y) { return phi(y) / (2.0L * a); }, -a, a, 4000));
}

double
cf_product_cmin(const std::string& kind, int n, double c, long long points)
{
  using cld = std::complex<long double>;
  const long double rn = std::sqrt(static_cast<long double>(n));
  const bool uni = kind == "uniform";
  if (!uni && kind != "centered-exponential")
    throw std::invalid_argument("unknown kind " + kind);
  const long double beta = uni ? 9.0L / 5.0L : 12.0L / std::exp(1.0L) - 2.0L;
  const long double s_max = uni ? std::sqrt(n / beta) : rn / beta;
  auto fn = [&](long double s) -> cld {
    const long double t = s / rn;
    cld f;
    if (uni) {
      const long double u = std::sqrt(3.0L) * t;
      f = std::sin(u) / u;
    } else {
      f = std::exp(cld(0.0L, -t)) / cld(1.0L, -t);
    }
    return std::pow(f, n);
  };
  long double best = 0.0L;
  const long double lo = s_max / 100.0L;
  for (long long i = 0; i < points; ++i) {
    const long double s = lo + (s_max - lo) * i / (points - 1);
    const long double e = std::abs(fn(s) - std::exp(-0.5L * s * s));
    const long double env = uni ? beta / n * std::pow(s, 4) * std::exp(-c * s * s)
                                : beta / rn * s * s * s * std::exp(-c * s * s);
    best = std::max(best, e / env);
  }
  return static_cast<double>(best);
}

double
product_beta3_dense_scan()
{
  const double a = std::sqrt(3.0);
  double best = 0.0;
  // Both coordinates are symmetric, so a quarter circle suffices.
  for (int k = 0; k <= 1024; ++k) {
    const double ang = 2.0 * M_PI * k / 4096.0;
    const double ca = std::cos(ang), sa = std::sin(ang);
    auto inner = [&](long double u) -> long double {
      const long double m = ca * u;
      if (sa < 1e-15)
        return std::fabs(m * m * m);
      auto g = [&](long double l) {
        const long double v = std::fabs(m + sa * l);
        return v * v * v * logistic_density(l);
      };
      const long double kink = -m / sa;
      std::vector<long double> cuts{ -25.0L, 25.0L };
      if (kink > -25.0L && kink < 25.0L)
        cuts.insert(cuts.begin() + 1, kink);
      return simpson_pieces(g, cuts, 800);
    };
    const double v = static_cast<double>(
      simpson_pieces([&](long double u) { return inner(u) / (2.0L * a); },
                     { -static_cast<long double>(a), 0.0L, static_cast<long double>(a) },
                     30));
    best = std::max(best, v);
  }
  return best;
}

double
theorem11_fixture()
{
  const double M = 1.0 / (2.0 * std::sqrt(3.0));
  return M * M * uniform_beta3() / std::sqrt(16.0);
}

double
theorem71_mixed_fixture()
{
  // Two summands, sigma_k = 0.8 and 1.2, each a uniform law (M_k =
  // 1/(2 sqrt(3) sigma_k)); beta = 1.5, n = 2, d = 1, C = 3, c = 0.1.
  const double s1 = 0.8, s2 = 1.2, beta = 1.5, C = 3.0, c = 0.1;
  const double M1 = 1.0 / (2.0 * std::sqrt(3.0) * s1), M2 = 1.0 / (2.0 * std::sqrt(3.0) * s2);
  const double e1 = std::min(s1 * s1 / (beta * beta), 1.0) / (M1 * M1 * s1 * s1);
  const double e2 = std::min(s2 * s2 / (beta * beta), 1.0) / (M2 * M2 * s2 * s2);
  return C * beta / std::sqrt(2.0) + C * std::sqrt(M1 * M2) * std::exp(-c * (e1 + e2));
}

double
gaussian_cf_tail(double eps, int n)
{
  return std::sqrt(2.0 * M_PI / n) * std::erfc(eps * std::sqrt(n / 2.0));
}

double
uniform_cf_l2m(int m)
{
  const long double T = 2000.0L * PI;
  auto f = [m](long double t) {
    const long double s = t < 1e-8L ? 1.0L : std::sin(t) / t;
    return std::pow(s, 2 * m);
  };
  std::vector<long double> cuts;
  for (int k = 0; k <= 2000; ++k)
    cuts.push_back(k * PI);
  long double v = simpson_pieces(f, cuts, 40);
  // Beyond T the average of sin^{2m} times t^{-2m}.
  const long double avg = binomial(2 * m, m) / std::pow(4.0L, m);
  v += avg * std::pow(T, 1 - 2 * m) / (2 * m - 1);
  return static_cast<double>(v / PI);
}

namespace {

double
gaussian_mass_in_disk(double r)
{
  return static_cast<double>(
    simpson([](long double u) { return u * std::exp(-0.5L * u * u); }, 0.0L, r, 2000));
}

double
uniform_self_convolution_at_zero()
{
  // w(0) = int p(y)^2 for uniform on [-1, 1].
  return static_cast<double>(simpson([](long double) { return 0.25L; }, -1.0L, 1.0L, 10));
}

double
uniform_pair_peak()
{
  // Two uniform[-1, 1]: density of the sum at 0 is int p(y) p(-y) dy.
  return uniform_self_convolution_at_zero();
}

double
uniform_small_t_separation()
{
  // (1 - f(t)) M^2 sigma^2 / (sigma t)^2 as t -> 0, M^2 sigma^2 = 1/12,
  // extrapolated from two small t by Richardson.
  auto q = [](long double t) {
    const long double u = std::sqrt(3.0L) * t;
    const long double one_minus = u * u / 6.0L - u * u * u * u / 120.0L +
                                  std::pow(u, 6) / 5040.0L;
    return one_minus / (12.0L * t * t);
  };
  const long double t = 1e-2L;
  return static_cast<double>((4.0L * q(t / 2) - q(t)) / 3.0L);
}

} // namespace

const std::vector<Fixture>&
registry()
{
  static const std::vector<Fixture> r{
    { "uniform.beta3", "E|X|^3, uniform, sigma 1", uniform_beta3_quadrature },
    { "gaussian.beta3", "E|N|^3", [] { return gaussian_abs_moment(3.0); } },
    { "exponential.beta3", "E|X|^3, centered exponential", exponential_beta3_quadrature },
    { "skewed_triangle.m3", "E X^3, skewed triangle", skewed_triangle_third_moment },
    { "ball_d2.radius", "radius of the unit-variance disk", ball_radius_d2 },
    { "region.c", "isotropy constant of the region example", region_isotropy_c },
    { "region.cross", "E X1 X2 of the region example",
      [] { return region_cross_moment(3.0 * std::sqrt(2.0)); } },
    { "uniform.n2.peak", "peak of the n = 2 uniform sum", triangle_peak },
    { "uniform.delta.n2", "delta_2 for uniform summands", [] { return uniform_delta(2); } },
    { "uniform.delta.n4", "delta_4 for uniform summands", [] { return uniform_delta(4); } },
    { "uniform.delta.n8", "delta_8 for uniform summands", [] { return uniform_delta(8); } },
    { "uniform.delta.n16", "delta_16 for uniform summands", [] { return uniform_delta(16); } },
    { "exponential.delta.n4", "delta_4, exponential", [] { return exponential_delta(4); } },
    { "exponential.delta.n8", "delta_8, exponential", [] { return exponential_delta(8); } },
    { "exponential.delta.n16", "delta_16, exponential", [] { return exponential_delta(16); } },
    { "exponential.delta.n32", "delta_32, exponential", [] { return exponential_delta(32); } },
    { "exponential.delta.n64", "delta_64, exponential", [] { return exponential_delta(64); } },
    { "uniform.sym.w0", "int p^2, uniform[-1, 1]", uniform_self_convolution_at_zero },
    { "uniform_pair.M", "M of the sum of two uniform[-1, 1]", uniform_pair_peak },
    { "uniform_gaussian.M", "M of uniform + gaussian", uniform_gaussian_conv_max },
    { "cf_product.uniform.n8", "C_min, uniform, c = 1/8",
      [] { return cf_product_cmin("uniform", 8, 0.125, 400001); } },
    { "cf_product.uniform.n16", "C_min, uniform, c = 1/8",
      [] { return cf_product_cmin("uniform", 16, 0.125, 400001); } },
    { "cf_product.uniform.n32", "C_min, uniform, c = 1/8",
      [] { return cf_product_cmin("uniform", 32, 0.125, 400001); } },
    { "cf_product.exponential.n8", "C_min, exponential, c = 1/8",
      [] { return cf_product_cmin("centered-exponential", 8, 0.125, 400001); } },
    { "cf_product.exponential.n16", "C_min, exponential, c = 1/8",
      [] { return cf_product_cmin("centered-exponential", 16, 0.125, 400001); } },
    { "cf_product.exponential.n32", "C_min, exponential, c = 1/8",
      [] { return cf_product_cmin("centered-exponential", 32, 0.125, 400001); } },
    { "product.beta3", "beta_3 of (uniform, logistic)", product_beta3_dense_scan },
    { "rhs11.uniform.n16", "(1.1) right side, C = 1", theorem11_fixture },
    { "rhs71.mixed", "refined bound for the mixed-sigma pair", theorem71_mixed_fixture },
    { "gaussian.cf_tail", "int_{|t|>=1} |f|^4, gaussian", [] { return gaussian_cf_tail(1.0, 4); } },
    { "uniform.l2", "(2 pi)^{-1} int |f|^2, uniform[-1, 1]", [] { return uniform_cf_l2m(1); } },
    { "uniform.l4", "(2 pi)^{-1} int |f|^4, uniform[-1, 1]", [] { return uniform_cf_l2m(2); } },
    { "gaussian_d2.b_r", "P(|X| < 2), standard gaussian in the plane",
      [] { return gaussian_mass_in_disk(2.0); } },
    { "uniform.separation_small_t", "small-t limit of the separation constant",
      uniform_small_t_separation },
  };
  return r;
}

} // namespace oracle
