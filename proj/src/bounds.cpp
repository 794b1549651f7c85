#include "llt/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>

#include <boost/math/tools/minima.hpp>

#include "llt/errors.hpp"

namespace llt {

using num::pi;

std::string
to_string(BoundMode mode)
{
  return mode == BoundMode::symmetric ? "symmetric" : "general";
}

int
Experiment::dim() const
{
  return summands.empty() ? 0 : summands.front().dim;
}

GridSpec
Experiment::effective_grid() const
{
  if (grid)
    return *grid;
  double sigma = 0.0;
  for (const auto& s : summands)
    sigma = std::max(sigma, s.sigma());
  return default_grid(dim(), sigma);
}

void
Experiment::validate() const
{
  if (summands.empty())
    throw ParameterError("experiment '" + name + "' has no families");
  for (const auto& s : summands)
    if (s.dim != dim())
      throw ParameterError("experiment '" + name + "' mixes dimensions");
  if (n_list.empty())
    throw ParameterError("experiment '" + name + "' has an empty n_list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1)
      throw ParameterError("n_list entries must be positive");
    if (i && n_list[i] <= n_list[i - 1])
      throw ParameterError("n_list must be strictly increasing");
  }
  if (mode == BoundMode::symmetric)
    for (const auto& s : summands)
      if (!s.third_moments_vanish)
        throw PreconditionError("symmetric mode needs vanishing third moments, but '" +
                                s.name + "' has nonzero ones");
  // Z_n is compared with the standard normal law, so the variances must
  // average to one over every prefix used.
  for (long long n : n_list) {
    double total = 0.0;
    for (long long k = 0; k < n; ++k)
      total += summands[k % summands.size()].sigma2;
    if (std::abs(total / n - 1.0) > 1e-9)
      throw PreconditionError("experiment '" + name +
                              "': summand variances must average to 1 (got " +
                              std::to_string(total / n) + " at n = " + std::to_string(n) + ")");
  }
  if (!(constants.C > 0.0) || !(constants.c > 0.0) || !(cf_c > 0.0))
    throw ParameterError("constants C and c must be positive");
  effective_grid().validate();
}

// ---------------------------------------------------------------------------

namespace {

GridSpec
subadditivity_grid(int dim)
{
  switch (dim) {
    case 1:
      return GridSpec{ 1, 48.0, 1LL << 18 };
    case 2:
      return GridSpec{ 2, 16.0, 1024 };
    case 3:
      return GridSpec{ 3, 12.0, 128 };
  }
  throw UnsupportedDimension("dimension must be 1, 2 or 3");
}

//! sup_x int p1(y) p2(x - y) dy, searched near x0 (d = 1).
double
convolution_max_1d(const DistributionSpec& a,
                   const DistributionSpec& b,
                   double x0,
                   double radius)
{
  auto conv = [&](double x) {
    std::vector<double> breaks(a.breakpoints);
    for (double q : b.breakpoints)
      breaks.push_back(x - q);
    const double lo = std::max(a.lo, x - b.hi), hi = std::min(a.hi, x - b.lo);
    auto f = [&](double y) {
      double v[1] = { y }, w[1] = { x - y };
      return a.density(Point(v, 1)) * b.density(Point(w, 1));
    };
    return num::integrate_fixed(f, lo, hi, breaks, 128, 20);
  };
  double best = conv(x0);
  // Kinks of the convolution sit at sums of breakpoints.
  for (double p : a.breakpoints)
    for (double q : b.breakpoints)
      if (std::abs(p + q - x0) <= radius)
        best = std::max(best, conv(p + q));
  std::uintmax_t iters = 80;
  const auto r = boost::math::tools::brent_find_minima(
    [&](double x) { return -conv(x); }, x0 - radius, x0 + radius, 26, iters);
  return std::max(best, -r.second);
}

} // namespace

SubadditivityLab::SubadditivityLab(std::vector<DistributionSpec> pool,
                                   std::optional<GridSpec> grid)
  : pool_(std::move(pool))
{
  if (pool_.empty())
    throw ParameterError("subadditivity pool is empty");
  const int dim = pool_.front().dim;
  for (const auto& d : pool_)
    if (d.dim != dim)
      throw ParameterError("subadditivity pool mixes dimensions");
  grid_ = grid ? *grid : subadditivity_grid(dim);
  grid_.validate();
  cfs_.reserve(pool_.size());
  for (const auto& d : pool_)
    cfs_.push_back(cf_on_grid(d, grid_));
}

SubadditivityRecord
SubadditivityLab::check(const std::vector<std::size_t>& members) const
{
  if (members.size() < 2)
    throw ParameterError("subadditivity needs at least two summands");
  SubadditivityRecord rec;
  const int d = grid_.dim;
  rec.dim = d;
  CharFnGrid sum = cfs_.at(members.front());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& dist = pool_.at(members[i]);
    rec.names.push_back(dist.name);
    const double M = max_density(dist);
    if (!std::isfinite(M))
      throw PreconditionError("maximal density of '" + dist.name + "' is not finite");
    rec.M_k.push_back(M);
    if (i == 0)
      continue;
    const auto& f = cfs_[members[i]];
    for (std::size_t k = 0; k < sum.values.size(); ++k)
      sum.values[k] *= f.values[k];
  }
  InversionOptions opts;
  opts.max_tail = std::numeric_limits<double>::infinity();
  opts.refuse_nonintegrable = false;
  const auto density = invert_to_density(sum, opts);
  const auto peak = sup_distance(density, [](Point) { return 0.0; });
  const auto tail = estimate_window_tail(sum);
  rec.M_sum = peak.value;
  rec.slack = 1e-9 + 2.0 * (tail.integrable ? tail.tail : 1.0);
  if (d == 1 && members.size() == 2) {
    rec.M_sum = convolution_max_1d(pool_[members[0]],
                                   pool_[members[1]],
                                   peak.argmax.front(),
                                   16.0 * grid_.step());
    rec.slack = 1e-9;
    rec.by_quadrature = true;
  }

  const double m = static_cast<double>(members.size());
  double harmonic = 0.0, half = 0.0, log_prod = 0.0;
  for (double M : rec.M_k) {
    harmonic += std::pow(M, -2.0 / d);
    half += 1.0 / (M * M);
    log_prod += std::log(M);
  }
  rec.harmonic_rhs = harmonic / num::e;
  rec.geometric_rhs = std::exp(log_prod / m);
  // M(S) is only known up to the slack; each inequality is accepted when
  // some value within the slack satisfies it.
  const double M_lo = std::max(rec.M_sum - rec.slack, 1e-300);
  rec.lhs = std::pow(rec.M_sum, -2.0 / d);
  rec.harmonic_ok = std::pow(M_lo, -2.0 / d) >= rec.harmonic_rhs;
  if (d == 1) {
    rec.half_rhs = 0.5 * half;
    rec.half_ok = std::pow(M_lo, -2.0) >= rec.half_rhs;
  }
  rec.geometric_ok = M_lo <= rec.geometric_rhs;
  return rec;
}

SubadditivityRecord
subadditivity_check(const std::vector<DistributionSpec>& dists)
{
  SubadditivityLab lab(dists);
  std::vector<std::size_t> all(dists.size());
  std::iota(all.begin(), all.end(), 0);
  return lab.check(all);
}

// ---------------------------------------------------------------------------

namespace {

//! f_n(t) for the cycled summands at t = s theta (Z_n scaling).
cplx
cf_of_sum(const std::vector<DistributionSpec>& summands,
          long long n,
          const std::vector<double>& theta,
          double s)
{
  const long long m = static_cast<long long>(summands.size());
  const double scale = s / std::sqrt(static_cast<double>(n));
  std::array<double, 3> t{};
  for (std::size_t a = 0; a < theta.size(); ++a)
    t[a] = scale * theta[a];
  cplx out = 1.0;
  for (long long i = 0; i < std::min(m, n); ++i) {
    const long long count = n / m + (i < n % m ? 1 : 0);
    out *= num::ipow(summands[i].cf(Point(t.data(), theta.size())), count);
  }
  return out;
}

std::vector<double>
sample_points(double s_max, int samples)
{
  // Logarithmic points resolve the s -> 0 limit of the ratio; the floor at
  // s_max / 100 keeps rounding noise of f_n out of the quotient.
  std::vector<double> s;
  const int nlog = samples / 5, nlin = samples - nlog;
  for (int i = 0; i < nlog; ++i)
    s.push_back(s_max * std::pow(10.0, -2.0 + 2.0 * i / nlog));
  const double lo = 1e-2 * s_max;
  for (int i = 0; i < nlin; ++i)
    s.push_back(lo + (s_max - lo) * (i + 1) / nlin);
  std::sort(s.begin(), s.end());
  return s;
}

} // namespace

CfProductRecord
cf_product_error_check(const Experiment& exp,
                       long long n,
                       double c,
                       int directions,
                       int samples)
{
  if (exp.summands.empty())
    throw ParameterError("experiment has no families");
  if (n < 1)
    throw ParameterError("n must be positive");
  const int d = exp.dim();
  const bool sym = exp.mode == BoundMode::symmetric;
  const int p = sym ? 4 : 3;
  const auto dirs = d == 1 ? std::vector<std::vector<double>>{ { 1.0 } }
                           : sphere_directions(d, directions);
  const double rn = std::sqrt(static_cast<double>(n));

  CfProductRecord rec;
  rec.n = n;
  rec.mode = exp.mode;
  rec.c = c;
  rec.interval = std::numeric_limits<double>::infinity();
  bool any_large = false;
  double c_unit = 0.0;

  for (std::size_t di = 0; di < dirs.size(); ++di) {
    const auto& theta = dirs[di];
    const double beta = beta_p_directional(exp.summands, n, theta, p);
    const double L = sym ? beta / n : beta / rn;
    const double s_max = sym ? std::sqrt(n / beta) : rn / beta;
    rec.interval = std::min(rec.interval, s_max);
    auto error_at = [&](double s) {
      return std::abs(cf_of_sum(exp.summands, n, theta, s) - std::exp(-0.5 * s * s));
    };
    auto envelope = [&](double s) {
      return L * std::pow(s, p) * std::exp(-c * s * s);
    };
    for (double s : sample_points(s_max, samples)) {
      const double e = error_at(s);
      rec.C_min = std::max(rec.C_min, e / envelope(s));
      ++rec.points;
      if (di == 0)
        rec.series.emplace_back(s, e);
    }
    if (L > 1.0) {
      any_large = true;
      for (double s : sample_points(1.0, samples)) {
        c_unit = std::max(c_unit, error_at(s) / envelope(s));
        ++rec.points;
      }
    }
  }
  if (any_large)
    rec.C_min_unit = c_unit;
  return rec;
}

// ---------------------------------------------------------------------------

double
theorem11_rhs(const FunctionalReport& r, long long n, int d, double C)
{
  if (n < 1)
    throw ParameterError("n must be positive");
  return std::pow(C * r.sigma, d) * r.M * r.M * r.beta3 /
         std::sqrt(static_cast<double>(n));
}

double
theorem12_rhs(const FunctionalReport& r, long long n, int d, double C)
{
  if (!r.third_moments_vanish)
    throw PreconditionError("the n^{-1} bound requires vanishing third moments");
  if (n < 1)
    throw ParameterError("n must be positive");
  return std::pow(C * r.sigma, 2 * d) * r.M * r.M * r.M * r.beta4 /
         static_cast<double>(n);
}

Theorem71Terms
theorem71_terms(const std::vector<std::pair<double, double>>& per_k,
                double beta,
                long long n,
                int d,
                double C,
                double c,
                BoundMode mode)
{
  if (n < 1 || per_k.size() != static_cast<std::size_t>(n))
    throw ParameterError("per-summand list must have exactly n entries");
  if (!(beta > 0.0))
    throw ParameterError("beta must be positive");
  const bool sym = mode == BoundMode::symmetric;
  const double Cd = std::pow(C, d);
  double log_prod = 0.0, sum = 0.0;
  for (const auto& [M, s] : per_k) {
    if (!(M > 0.0) || !(s > 0.0))
      throw ParameterError("M_k and sigma_k must be positive");
    log_prod += std::log(M);
    const double ratio = sym ? s * s / beta : s * s / (beta * beta);
    sum += std::min(ratio, 1.0) / (M * M * std::pow(s, 2 * d));
  }
  Theorem71Terms out;
  out.first = Cd * beta / (sym ? static_cast<double>(n) : std::sqrt(static_cast<double>(n)));
  out.second = Cd * std::exp(log_prod / n - std::pow(c, d) * sum);
  return out;
}

double
theorem71_rhs(const std::vector<std::pair<double, double>>& per_k,
              double beta,
              long long n,
              int d,
              double C,
              double c,
              BoundMode mode)
{
  return theorem71_terms(per_k, beta, n, d, C, c, mode).total();
}

ChainRecord
simplification_chain(double M,
                     double sigma,
                     double beta,
                     long long n,
                     int d,
                     double C,
                     double c,
                     BoundMode mode)
{
  if (sigma < 1.0 || beta < 1.0)
    throw PreconditionError("the simplification assumes sigma >= 1 and beta >= 1");
  ChainRecord rec{ M, sigma, beta, n, d, mode };
  const std::vector<std::pair<double, double>> per_k(n, { M, sigma });
  rec.second = theorem71_terms(per_k, beta, n, d, C, c, mode).second;
  const double Cd = std::pow(C, d);
  if (mode == BoundMode::general)
    rec.majorant = Cd * std::pow(c, -0.5 * d) * M * M * std::pow(sigma, d) * beta /
                   std::sqrt(static_cast<double>(n));
  else
    rec.majorant = Cd * std::pow(c, -1.0 * d) * M * M * M * std::pow(sigma, 2 * d) *
                   beta / static_cast<double>(n);
  rec.holds = rec.second <= rec.majorant;
  return rec;
}

// ---------------------------------------------------------------------------

DeltaResult
compute_delta_n(const std::vector<DistributionSpec>& summands,
                long long n,
                const GridSpec& grid)
{
  grid.validate();
  const auto cf = product_cf(summands, n, grid);
  const auto density = invert_to_density(cf);
  const auto sup = sup_distance(density, standard_normal_density);
  return { sup.value, sup.argmax, density.mass_defect };
}

RateFit
fit_rate(const std::vector<long long>& n, const std::vector<double>& delta)
{
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size() && i < delta.size(); ++i)
    if (delta[i] > 0.0 && std::isfinite(delta[i])) {
      x.push_back(std::log(static_cast<double>(n[i])));
      y.push_back(std::log(delta[i]));
    }
  RateFit out;
  out.points = x.size();
  if (x.size() < 2) {
    out.slope = out.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  auto fit = num::fit_line(x, y);
  if (x.size() >= 4) {
    const auto rest = num::fit_line(std::span(x).subspan(1), std::span(y).subspan(1));
    const double resid = std::abs(y[0] - (rest.intercept + rest.slope * x[0]));
    if (resid > 3.0 * rest.rms && resid > 1e-9) {
      fit = rest;
      out.dropped_smallest = true;
      out.points -= 1;
    }
  }
  out.slope = fit.slope;
  out.stderr_ = fit.slope_stderr;
  out.intercept = fit.intercept;
  return out;
}

namespace {

FunctionalReport
report_for(const std::vector<DistributionSpec>& summands,
           long long n,
           const std::optional<FunctionalReport>& single)
{
  if (!single)
    return functional_report(summands, n);
  FunctionalReport r = *single;
  r.n = n;
  r.L3 = r.beta3 / std::sqrt(static_cast<double>(n));
  r.L4 = r.beta4 / static_cast<double>(n);
  return r;
}

} // namespace

BoundReport
verify_bound(const Experiment& exp, int jobs)
{
  exp.validate();
  const int d = exp.dim();
  const auto grid = exp.effective_grid();
  const bool sym = exp.mode == BoundMode::symmetric;
  const auto& K = exp.constants;

  // With one family the functionals do not depend on n.
  std::optional<FunctionalReport> single;
  if (exp.summands.size() == 1)
    single = functional_report(exp.summands, exp.n_list.front());
  std::vector<std::pair<double, double>> per_summand;
  for (const auto& s : exp.summands)
    per_summand.emplace_back(max_density(s), s.sigma());

  BoundReport out;
  out.name = exp.name;
  out.dim = d;
  out.mode = exp.mode;
  out.functionals = report_for(exp.summands, exp.n_list.front(), single);
  out.records.resize(exp.n_list.size());

  auto evaluate = [&](std::size_t i) {
    const long long n = exp.n_list[i];
    BoundRecord rec;
    rec.n = n;
    const auto fr = report_for(exp.summands, n, single);
    std::vector<std::pair<double, double>> per_k;
    per_k.reserve(n);
    for (long long k = 0; k < n; ++k)
      per_k.push_back(per_summand[k % per_summand.size()]);
    rec.rhs_11 = theorem11_rhs(fr, n, d, K.C);
    rec.rhs_71 = theorem71_rhs(per_k, fr.beta3, n, d, K.C, K.c, BoundMode::general);
    if (fr.third_moments_vanish) {
      rec.rhs_12 = theorem12_rhs(fr, n, d, K.C);
      rec.rhs_72 = theorem71_rhs(per_k, fr.beta4, n, d, K.C, K.c, BoundMode::symmetric);
    }
    try {
      rec.delta_n = compute_delta_n(exp.summands, n, grid).value;
      const double rhs = sym ? *rec.rhs_12 : *rec.rhs_11;
      rec.ratio = rec.delta_n / rhs;
      rec.feasible = rec.delta_n <= rhs;
    } catch (const WindowError& e) {
      rec.error = e.what();
      rec.delta_n = std::numeric_limits<double>::quiet_NaN();
      rec.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
  };

  jobs = std::max(1, jobs);
  for (std::size_t start = 0; start < exp.n_list.size(); start += jobs) {
    const std::size_t stop = std::min(exp.n_list.size(), start + jobs);
    if (jobs == 1) {
      out.records[start] = evaluate(start);
      continue;
    }
    std::vector<std::future<BoundRecord>> pending;
    for (std::size_t i = start; i < stop; ++i)
      pending.push_back(std::async(std::launch::async, evaluate, i));
    for (std::size_t i = start; i < stop; ++i)
      out.records[i] = pending[i - start].get();
  }

  std::vector<double> deltas;
  for (const auto& rec : out.records) {
    deltas.push_back(rec.error.empty() ? rec.delta_n : std::numeric_limits<double>::quiet_NaN());
    if (!rec.error.empty())
      continue;
    const auto fr = report_for(exp.summands, rec.n, single);
    const double n = static_cast<double>(rec.n);
    // Smallest C with delta_n <= rhs(C); both forms are monomials in C.
    const double c11 =
      sym ? std::pow(rec.delta_n * n / (std::pow(fr.sigma, 2 * d) * std::pow(fr.M, 3) * fr.beta4),
                     0.5 / d)
          : std::pow(rec.delta_n * std::sqrt(n) / (std::pow(fr.sigma, d) * fr.M * fr.M * fr.beta3),
                     1.0 / d);
    const double rhs71_unit =
      (sym ? *rec.rhs_72 : *rec.rhs_71) / std::pow(K.C, d);
    out.C_min = std::max(out.C_min, c11);
    out.C_min_71 = std::max(out.C_min_71, std::pow(rec.delta_n / rhs71_unit, 1.0 / d));
  }
  out.rate = fit_rate(exp.n_list, deltas);
  return out;
}

CorollaryRecord
corollary12_check(const Experiment& exp, double beta3_cap, double beta4_cap)
{
  if (exp.summands.empty())
    throw ParameterError("experiment has no families");
  for (const auto& s : exp.summands) {
    if (!s.log_concave)
      throw PreconditionError("'" + s.name + "' is not log-concave");
    if (std::abs(s.sigma() - 1.0) > 1e-9)
      throw PreconditionError("'" + s.name + "' must have sigma = 1");
  }
  exp.validate();
  CorollaryRecord rec;
  rec.name = exp.name;
  const auto fr = functional_report(exp.summands, exp.n_list.front());
  rec.beta3 = fr.beta3;
  rec.beta4 = fr.beta4;
  rec.beta3_cap = beta3_cap;
  rec.beta4_cap = beta4_cap;
  rec.caps_ok = fr.beta3 < beta3_cap && fr.beta4 < beta4_cap;
  rec.symmetric = fr.third_moments_vanish;
  rec.n_list = exp.n_list;
  const auto grid = exp.effective_grid();
  double lin = 0.0;
  for (long long n : exp.n_list) {
    const double delta = compute_delta_n(exp.summands, n, grid).value;
    rec.delta.push_back(delta);
    rec.C_d_sqrt = std::max(rec.C_d_sqrt, delta * std::sqrt(static_cast<double>(n)));
    lin = std::max(lin, delta * static_cast<double>(n));
  }
  if (rec.symmetric)
    rec.C_d_linear = lin;
  return rec;
}

} // namespace llt
