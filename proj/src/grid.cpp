#include "llt/grid.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>

#include "llt/errors.hpp"
#include "llt/numerics.hpp"

namespace llt {

using num::pi;

double
GridSpec::freq_step() const
{
  return pi / half_width;
}

double
GridSpec::t_max() const
{
  return pi * points_per_axis / (2.0 * half_width);
}

long long
GridSpec::size() const
{
  long long s = 1;
  for (int i = 0; i < dim; ++i)
    s *= points_per_axis;
  return s;
}

void
GridSpec::validate(double required_window) const
{
  if (dim < 1 || dim > 3)
    throw UnsupportedDimension("grid dimension must be 1, 2 or 3");
  if (points_per_axis < 64 || !num::is_power_of_two(points_per_axis))
    throw ParameterError("points per axis must be a power of two >= 64, got " +
                         std::to_string(points_per_axis));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ParameterError("grid half-width must be positive");
  double cap_mb = 4096.0;
  if (const char* env = std::getenv("LLT_LAB_MAX_GRID_MB"))
    cap_mb = std::atof(env);
  // A grid operation holds about three complex arrays of the full size.
  const double mb = 3.0 * 16.0 * static_cast<double>(size()) / (1024.0 * 1024.0);
  if (cap_mb > 0.0 && mb > cap_mb)
    throw ParameterError("grid of " + std::to_string(size()) +
                         " points exceeds memory cap LLT_LAB_MAX_GRID_MB=" +
                         std::to_string(cap_mb));
  if (t_max() < required_window)
    throw WindowError("frequency extent " + std::to_string(t_max()) +
                      " is below the requested window " +
                      std::to_string(required_window));
}

GridSpec
default_grid(int dim, double sigma)
{
  GridSpec g;
  g.dim = dim;
  g.half_width = 12.0 * sigma * std::sqrt(static_cast<double>(dim));
  g.points_per_axis = dim == 1 ? 4096 : (dim == 2 ? 512 : 128);
  return g;
}

double
DensityGrid::max_value() const
{
  double m = -INFINITY;
  for (double v : values)
    m = std::max(m, v);
  return m;
}

std::vector<double>
DensityGrid::clamped() const
{
  std::vector<double> out(values);
  for (double& v : out)
    v = std::max(v, 0.0);
  return out;
}

std::vector<long long>
unravel(long long flat, int dim, long long n)
{
  std::vector<long long> idx(dim);
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = flat % n;
    flat /= n;
  }
  return idx;
}

namespace {

long long
origin_index(const GridSpec& spec)
{
  long long flat = 0;
  for (int a = 0; a < spec.dim; ++a)
    flat = flat * spec.points_per_axis + spec.points_per_axis / 2;
  return flat;
}

//! (-1)^{j_0 + ... + j_{d-1}} for a flat index.
double
checker_sign(long long flat, int dim, long long n)
{
  long long s = 0;
  for (int a = 0; a < dim; ++a) {
    s += flat % n;
    flat /= n;
  }
  return (s & 1) ? -1.0 : 1.0;
}

std::vector<std::array<int, 3>>
multi_indices(int dim, int order)
{
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= order; ++a)
    for (int b = 0; b <= (dim > 1 ? order - a : 0); ++b)
      for (int c = 0; c <= (dim > 2 ? order - a - b : 0); ++c)
        out.push_back({ a, b, c });
  return out;
}

CharFnGrid
analytic_cf(const DistributionSpec& dist, const GridSpec& spec)
{
  CharFnGrid out;
  out.spec = spec;
  out.source = CfSource::analytic;
  const long long total = spec.size();
  const long long n = spec.points_per_axis;
  out.values.resize(total);
  std::array<double, 3> t{};
  for (long long flat = 0; flat < total; ++flat) {
    long long rem = flat;
    for (int a = spec.dim - 1; a >= 0; --a) {
      t[a] = spec.t(rem % n);
      rem /= n;
    }
    out.values[flat] = dist.cf(Point(t.data(), spec.dim));
  }
  return out;
}

//! Continuous Fourier transform of the sampled density. Each cell
//! [x_j - h/2, x_j + h/2]^d contributes its local moments
//! mu_{j,m} = int (x - x_j)^m p(x) dx, so that
//! f(t) = sum_m (i t)^m / m! * sum_j mu_{j,m} e^{i <t, x_j>}
//! with one FFT per multi-index m.
CharFnGrid
transformed_cf(const DistributionSpec& dist, const GridSpec& spec)
{
  const int dim = spec.dim;
  const long long n = spec.points_per_axis;
  const long long total = spec.size();
  const double h = spec.step();
  const int order = dim == 1 ? 8 : (dim == 2 ? 6 : 2);
  const int nodes = dim == 1 ? 12 : (dim == 2 ? 6 : 3);
  const auto& gl = num::gauss_legendre(nodes);
  const auto mis = multi_indices(dim, order);

  std::vector<std::vector<double>> moments(mis.size(),
                                           std::vector<double>(total, 0.0));
  if (dim == 1) {
    std::vector<double> cuts;
    for (long long j = 0; j < n; ++j) {
      const double xc = spec.x(j);
      const double lo = std::max(xc - 0.5 * h, dist.lo);
      const double hi = std::min(xc + 0.5 * h, dist.hi);
      if (!(hi > lo))
        continue;
      cuts.assign({ lo, hi });
      for (double b : dist.breakpoints)
        if (b > lo && b < hi)
          cuts.push_back(b);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
        const double half = 0.5 * (cuts[p + 1] - cuts[p]);
        for (int q = 0; q < nodes; ++q) {
          std::array<double, 1> x{ mid + half * gl.nodes[q] };
          const double w = half * gl.weights[q] * dist.density(x);
          double pw = 1.0;
          const double u = x[0] - xc;
          for (int m = 0; m <= order; ++m) {
            moments[m][j] += w * pw;
            pw *= u;
          }
        }
      }
    }
  } else if (dim == 2 && dist.line_breaks) {
    // Rows of cells; along each horizontal quadrature line the density is
    // split at its jumps, so cut cells are integrated accurately.
    const double edge0 = spec.x(0) - 0.5 * h;
    std::vector<double> vertical_breaks{ 0.0 };
    for (int i = -8; i <= 8; ++i) {
      const std::array<double, 2> o{ 0.999 * dist.extent() * i / 8.0, 0.0 };
      const std::array<double, 2> up{ 0.0, 1.0 };
      for (double v : line_breaks(dist, o, up))
        vertical_breaks.push_back(v);
    }
    std::sort(vertical_breaks.begin(), vertical_breaks.end());
    const std::array<double, 2> right{ 1.0, 0.0 };
    std::vector<double> cuts;
    for (long long j2 = 0; j2 < n; ++j2) {
      const double yc = spec.x(j2);
      cuts.assign({ yc - 0.5 * h, yc + 0.5 * h });
      for (double v : vertical_breaks)
        if (v > cuts[0] && v < yc + 0.5 * h)
          cuts.push_back(v);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
        const double ymid = 0.5 * (cuts[piece] + cuts[piece + 1]);
        const double yhalf = 0.5 * (cuts[piece + 1] - cuts[piece]);
        for (int qy = 0; qy < nodes; ++qy) {
          const double y = ymid + yhalf * gl.nodes[qy];
          const double wy = yhalf * gl.weights[qy];
          const std::array<double, 2> o{ 0.0, y };
          auto br = line_breaks(dist, o, right);
          std::sort(br.begin(), br.end());
          std::size_t next = 0;
          std::array<double, 8> py{};
          py[0] = 1.0;
          for (int m = 1; m <= order; ++m)
            py[m] = py[m - 1] * (y - yc);
          for (long long j1 = 0; j1 < n; ++j1) {
            const double a = edge0 + j1 * h, b = a + h;
            while (next < br.size() && br[next] <= a)
              ++next;
            double lo = a;
            for (std::size_t k = next;; ++k) {
              const double hi = (k < br.size() && br[k] < b) ? br[k] : b;
              const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
              for (int qx = 0; qx < nodes; ++qx) {
                std::array<double, 2> x{ mid + half * gl.nodes[qx], y };
                const double dens = dist.density(x);
                if (dens == 0.0)
                  continue;
                const double w = wy * half * gl.weights[qx] * dens;
                const double u = x[0] - spec.x(j1);
                std::array<double, 8> px{};
                px[0] = 1.0;
                for (int m = 1; m <= order; ++m)
                  px[m] = px[m - 1] * u;
                for (std::size_t mi = 0; mi < mis.size(); ++mi)
                  moments[mi][j1 * n + j2] += w * px[mis[mi][0]] * py[mis[mi][1]];
              }
              if (hi >= b)
                break;
              lo = hi;
            }
          }
        }
      }
    }
  } else {
    const long long per_cell = static_cast<long long>(std::pow(nodes, dim));
    std::array<double, 3> x{};
    std::array<double, 3> u{};
    std::array<std::array<double, 8>, 3> powers{};
    for (long long flat = 0; flat < total; ++flat) {
      const auto idx = unravel(flat, dim, n);
      for (long long q = 0; q < per_cell; ++q) {
        long long rem = q;
        double w = 1.0;
        for (int a = 0; a < dim; ++a) {
          const int node = static_cast<int>(rem % nodes);
          rem /= nodes;
          u[a] = 0.5 * h * gl.nodes[node];
          x[a] = spec.x(idx[a]) + u[a];
          w *= 0.5 * h * gl.weights[node];
        }
        const double dens = dist.density(Point(x.data(), dim));
        if (dens == 0.0)
          continue;
        w *= dens;
        for (int a = 0; a < dim; ++a) {
          powers[a][0] = 1.0;
          for (int m = 1; m <= order; ++m)
            powers[a][m] = powers[a][m - 1] * u[a];
        }
        for (std::size_t mi = 0; mi < mis.size(); ++mi) {
          double v = w;
          for (int a = 0; a < dim; ++a)
            v *= powers[a][mis[mi][a]];
          moments[mi][flat] += v;
        }
      }
    }
  }

  CharFnGrid out;
  out.spec = spec;
  out.source = CfSource::transformed;
  out.values.assign(total, cplx(0.0, 0.0));
  std::vector<cplx> buffer(total);
  std::array<double, 3> t{};
  for (std::size_t mi = 0; mi < mis.size(); ++mi) {
    for (long long flat = 0; flat < total; ++flat)
      buffer[flat] = moments[mi][flat] * checker_sign(flat, dim, n);
    std::vector<double>().swap(moments[mi]);
    num::fft_inplace(buffer, dim, static_cast<int>(n), +1);
    double factorial = 1.0;
    for (int a = 0; a < dim; ++a)
      factorial *= std::tgamma(mis[mi][a] + 1.0);
    for (long long flat = 0; flat < total; ++flat) {
      long long rem = flat;
      for (int a = dim - 1; a >= 0; --a) {
        t[a] = spec.t(rem % n);
        rem /= n;
      }
      cplx coef(1.0 / factorial, 0.0);
      for (int a = 0; a < dim; ++a)
        coef *= num::ipow(cplx(0.0, t[a]), mis[mi][a]);
      out.values[flat] += coef * checker_sign(flat, dim, n) * buffer[flat];
    }
  }
  const cplx mass = out.values[origin_index(spec)];
  for (auto& v : out.values)
    v /= mass.real();
  return out;
}

} // namespace

const cplx&
CharFnGrid::at_origin() const
{
  return values[origin_index(spec)];
}

double
CharFnGrid::hermitian_defect() const
{
  const int dim = spec.dim;
  const long long n = spec.points_per_axis;
  double worst = 0.0;
  for (long long flat = 0; flat < spec.size(); ++flat) {
    const auto idx = unravel(flat, dim, n);
    long long mirror = 0;
    bool valid = true;
    for (int a = 0; a < dim; ++a) {
      if (idx[a] == 0) {
        valid = false;
        break;
      }
      mirror = mirror * n + (n - idx[a]);
    }
    if (!valid)
      continue;
    worst = std::max(worst, std::abs(values[mirror] - std::conj(values[flat])));
  }
  return worst;
}

CharFnGrid
cf_on_grid(const DistributionSpec& dist,
           const GridSpec& spec,
           CfPreference preference,
           double required_window)
{
  spec.validate(required_window);
  if (spec.dim != dist.dim)
    throw ParameterError("grid dimension does not match the distribution");
  bool analytic = false;
  switch (preference) {
    case CfPreference::automatic:
      analytic = dist.has_closed_form_cf();
      break;
    case CfPreference::analytic:
      analytic = true;
      break;
    case CfPreference::transformed:
      analytic = false;
      break;
  }
  return analytic ? analytic_cf(dist, spec) : transformed_cf(dist, spec);
}

CharFnGrid
product_cf(const std::vector<DistributionSpec>& dists,
           long long n,
           const GridSpec& spec,
           double scale,
           CfPreference preference)
{
  if (dists.empty())
    throw ParameterError("product_cf needs at least one distribution");
  if (n < 1)
    throw ParameterError("number of summands must be >= 1");
  for (const auto& d : dists)
    if (d.dim != dists.front().dim)
      throw ParameterError("dimension mismatch among summands");
  if (!(scale > 0.0))
    scale = 1.0 / std::sqrt(static_cast<double>(n));
  const long long m = static_cast<long long>(dists.size());
  CharFnGrid out;
  for (long long i = 0; i < std::min(m, n); ++i) {
    const long long count = n / m + (i < n % m ? 1 : 0);
    auto factor = cf_on_grid(scaled(dists[i], scale), spec, preference);
    if (i == 0) {
      out = std::move(factor);
      for (auto& v : out.values)
        v = num::ipow(v, count);
      continue;
    }
    if (factor.source == CfSource::transformed)
      out.source = CfSource::transformed;
    for (std::size_t k = 0; k < out.values.size(); ++k)
      out.values[k] *= num::ipow(factor.values[k], count);
  }
  return out;
}

WindowTail
estimate_window_tail(const CharFnGrid& cf, double power)
{
  const auto& spec = cf.spec;
  const int dim = spec.dim;
  const long long n = spec.points_per_axis;
  const double tmax = spec.t_max();
  double inner = 0.0, outer = 0.0;
  std::array<double, 3> t{};
  for (long long flat = 0; flat < spec.size(); ++flat) {
    long long rem = flat;
    double r2 = 0.0;
    for (int a = dim - 1; a >= 0; --a) {
      t[a] = spec.t(rem % n);
      r2 += t[a] * t[a];
      rem /= n;
    }
    const double r = std::sqrt(r2);
    if (r < 0.25 * tmax || r >= tmax)
      continue;
    const double v = std::pow(std::abs(cf.values[flat]), power);
    (r < 0.5 * tmax ? inner : outer) += v;
  }
  const double scale = std::pow(spec.freq_step() / (2.0 * pi), dim);
  const auto est = num::dyadic_tail(inner * scale, outer * scale);
  return { est.tail, est.integrable };
}

DensityGrid
invert_to_density(const CharFnGrid& cf, const InversionOptions& options)
{
  const auto& spec = cf.spec;
  const auto tail = estimate_window_tail(cf);
  if (!tail.integrable && options.refuse_nonintegrable)
    throw InsufficientWindow(
      "|f| does not decay fast enough to be integrable over the window; "
      "inversion refused");
  if (tail.integrable && tail.tail > options.max_tail)
    throw InsufficientWindow("estimated CF tail beyond T_max = " +
                             std::to_string(spec.t_max()) + " is " +
                             std::to_string(tail.tail) +
                             "; widen the grid");
  const int dim = spec.dim;
  const long long n = spec.points_per_axis;
  const long long total = spec.size();
  std::vector<cplx> buffer(total);
  for (long long flat = 0; flat < total; ++flat)
    buffer[flat] = cf.values[flat] * checker_sign(flat, dim, n);
  num::fft_inplace(buffer, dim, static_cast<int>(n), -1);
  const double scale = std::pow(spec.freq_step() / (2.0 * pi), dim);
  DensityGrid out;
  out.spec = spec;
  out.values.resize(total);
  double mass = 0.0;
  for (long long flat = 0; flat < total; ++flat) {
    out.values[flat] = scale * checker_sign(flat, dim, n) * buffer[flat].real();
    mass += out.values[flat];
  }
  out.mass_defect = std::abs(1.0 - mass * std::pow(spec.step(), dim));
  return out;
}

double
standard_normal_density(Point x)
{
  double r2 = 0.0;
  for (double v : x)
    r2 += v * v;
  return std::pow(2.0 * pi, -0.5 * static_cast<double>(x.size())) *
         std::exp(-0.5 * r2);
}

SupDistance
sup_distance(const DensityGrid& p, const std::function<double(Point)>& q_analytic)
{
  const auto& spec = p.spec;
  const int dim = spec.dim;
  const long long n = spec.points_per_axis;
  const long long total = spec.size();
  std::vector<double> diff(total);
  std::array<double, 3> x{};
  long long best = 0;
  for (long long flat = 0; flat < total; ++flat) {
    long long rem = flat;
    for (int a = dim - 1; a >= 0; --a) {
      x[a] = spec.x(rem % n);
      rem /= n;
    }
    diff[flat] = std::abs(p.values[flat] - q_analytic(Point(x.data(), dim)));
    if (diff[flat] > diff[best])
      best = flat;
  }
  SupDistance out;
  out.grid_value = diff[best];
  out.value = diff[best];
  const auto idx = unravel(best, dim, n);
  out.argmax.resize(dim);
  long long stride = 1;
  std::vector<long long> strides(dim);
  for (int a = dim - 1; a >= 0; --a) {
    strides[a] = stride;
    stride *= n;
  }
  for (int a = 0; a < dim; ++a) {
    out.argmax[a] = spec.x(idx[a]);
    if (idx[a] == 0 || idx[a] == n - 1)
      continue;
    const auto peak = num::parabolic_peak(
      diff[best - strides[a]], diff[best], diff[best + strides[a]]);
    out.argmax[a] += peak.offset * spec.step();
    out.value += peak.value - diff[best];
  }
  return out;
}

namespace {

constexpr char kMagic[4] = { 'L', 'L', 'T', 'G' };

template<class T>
void
put(std::ostream& out, T v)
{
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template<class T>
T
get(std::istream& in)
{
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in)
    throw IoError("truncated grid file");
  return v;
}

void
write_header(std::ostream& out, const GridSpec& spec, std::uint32_t dtype)
{
  out.write(kMagic, 4);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, dtype);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.dim));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(spec.points_per_axis));
  put<double>(out, spec.half_width);
}

GridSpec
read_header(std::istream& in, std::uint32_t expected_dtype)
{
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not a grid file");
  if (get<std::uint32_t>(in) != 1)
    throw IoError("unsupported grid file version");
  if (get<std::uint32_t>(in) != expected_dtype)
    throw IoError("unexpected grid dtype");
  GridSpec spec;
  spec.dim = static_cast<int>(get<std::uint32_t>(in));
  spec.points_per_axis = static_cast<long long>(get<std::uint64_t>(in));
  spec.half_width = get<double>(in);
  spec.validate();
  return spec;
}

void
format_coords(char* buf, std::size_t len, const GridSpec& spec, long long flat,
              bool frequency)
{
  const auto idx = unravel(flat, spec.dim, spec.points_per_axis);
  std::size_t pos = 0;
  for (int a = 0; a < spec.dim; ++a) {
    const double v = frequency ? spec.t(idx[a]) : spec.x(idx[a]);
    pos += std::snprintf(buf + pos, len - pos, "%.11e,", v);
  }
}

} // namespace

void
write_binary(std::ostream& out, const DensityGrid& grid)
{
  write_header(out, grid.spec, 1);
  out.write(reinterpret_cast<const char*>(grid.values.data()),
            static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
  if (!out)
    throw IoError("failed to write density grid");
}

void
write_binary(std::ostream& out, const CharFnGrid& grid)
{
  write_header(out, grid.spec, 2);
  out.write(reinterpret_cast<const char*>(grid.values.data()),
            static_cast<std::streamsize>(grid.values.size() * sizeof(cplx)));
  if (!out)
    throw IoError("failed to write CF grid");
}

DensityGrid
read_density_binary(std::istream& in)
{
  DensityGrid g;
  g.spec = read_header(in, 1);
  g.values.resize(g.spec.size());
  in.read(reinterpret_cast<char*>(g.values.data()),
          static_cast<std::streamsize>(g.values.size() * sizeof(double)));
  if (!in)
    throw IoError("truncated density grid");
  double mass = 0.0;
  for (double v : g.values)
    mass += v;
  g.mass_defect = std::abs(1.0 - mass * std::pow(g.spec.step(), g.spec.dim));
  return g;
}

CharFnGrid
read_cf_binary(std::istream& in)
{
  CharFnGrid g;
  g.spec = read_header(in, 2);
  g.values.resize(g.spec.size());
  in.read(reinterpret_cast<char*>(g.values.data()),
          static_cast<std::streamsize>(g.values.size() * sizeof(cplx)));
  if (!in)
    throw IoError("truncated CF grid");
  return g;
}

void
write_csv(std::ostream& out, const DensityGrid& grid)
{
  static const char* axes[] = { "x1", "x2", "x3" };
  for (int a = 0; a < grid.spec.dim; ++a)
    out << (grid.spec.dim == 1 ? "x" : axes[a]) << ',';
  out << "density\n";
  char buf[160];
  for (long long flat = 0; flat < grid.spec.size(); ++flat) {
    format_coords(buf, sizeof(buf), grid.spec, flat, false);
    out << buf;
    std::snprintf(buf, sizeof(buf), "%.11e\n", std::max(grid.values[flat], 0.0));
    out << buf;
  }
}

void
write_csv(std::ostream& out, const CharFnGrid& grid)
{
  static const char* axes[] = { "t1", "t2", "t3" };
  for (int a = 0; a < grid.spec.dim; ++a)
    out << (grid.spec.dim == 1 ? "t" : axes[a]) << ',';
  out << "re,im\n";
  char buf[160];
  for (long long flat = 0; flat < grid.spec.size(); ++flat) {
    format_coords(buf, sizeof(buf), grid.spec, flat, true);
    out << buf;
    std::snprintf(buf,
                  sizeof(buf),
                  "%.11e,%.11e\n",
                  grid.values[flat].real(),
                  grid.values[flat].imag());
    out << buf;
  }
}

} // namespace llt
