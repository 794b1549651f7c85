#pragma once

#include <string>
#include <vector>

#include "llt/distributions.hpp"

namespace llt {

//! Law of X - X' for an independent copy X'. Its CF is |f|^2 and its
//! maximal density is w(0) = int p^2. Densities are available in d <= 2.
DistributionSpec
symmetrize(const DistributionSpec& dist);

struct SeparationReport
{
  std::string family;
  int dim = 1;
  double eps = 0.0;
  double window = 0.0;      //!< T_max of the scan
  double delta_f = 0.0;     //!< max |f(t)| over eps <= |t| <= T_max
  double c_empirical = 0.0; //!< c with |f| <= 1 - c^d min(s^2 t^2, 1)/(M^2 s^{2d})
  //! Same infimum restricted to sigma |t| >= 1/4, where the d = 1 proof
  //! gives the floor 1/3456.
  double c_far = 0.0;
  std::vector<double> t_critical;
  long long points = 0;
  //! Upper bound for sup |f| beyond the window, from the Lipschitz
  //! constant E|X| and tails of int |f|^{2m}.
  double beyond_window_bound = 0.0;
  bool certified = false;
  bool window_warning = false;
};

//! Scans |f| over eps <= |t| <= t_max. d = 1 uses a dense mixed
//! linear/logarithmic grid; d >= 2 a radial lattice (256 radii times 64
//! directions in d = 2 or a 256-point spiral in d = 3). `resolution`
//! multiplies every count. t_max <= 0 selects 40 / sigma.
SeparationReport
separation_scan(const DistributionSpec& dist,
                double eps,
                double t_max = 0.0,
                int resolution = 1);

//! X_r with density p 1{|x| < r} / b_r and the checks of the truncation
//! argument at probe directions.
struct TruncatedSpec
{
  DistributionSpec base;
  DistributionSpec spec;
  double r = 0.0;
  double b_r = 0.0;
  bool default_radius = false;
  std::vector<std::vector<double>> directions;
  std::vector<double> variances;      //!< Var <theta, X_r>
  std::vector<double> marginal_max;   //!< M(<theta, X_r>)
  double max_variance = 0.0;
  double max_marginal = 0.0;
  double marginal_M_bound = 0.0; //!< 2 omega_{d-1} r^{d-1} M
  bool variance_bound_ok = false;
  bool marginal_bound_ok = false;
  bool mass_ok = true; //!< b_r >= 1/2 (checked at the default radius)
};

//! Truncation at radius r; r <= 0 selects sigma sqrt(2d), which needs
//! d >= 2. Throws DegenerateTruncation when b_r < 0.1.
TruncatedSpec
truncate(const DistributionSpec& dist, double r = 0.0, int directions = 16);

struct RelationCheck
{
  long long points = 0;
  long long violations = 0;
  double min_margin = 0.0; //!< min of (1 - |g|^2) - (1 - |g_r|^2)/2
};

//! 1 - |g(s)|^2 >= (1 - |g_r(s)|^2)/2 along the probe directions of the
//! truncation, for 0 < s <= window.
RelationCheck
truncation_relation_check(const TruncatedSpec& trunc,
                          double window,
                          int samples = 128);

//! int_{|t| >= r_min} |f(t)|^power dt (no (2 pi)^{-d} factor), with the
//! tail beyond the last shell extrapolated geometrically. Throws
//! InsufficientWindow when the integrand is not integrable.
double
cf_power_integral(const DistributionSpec& dist, double power, double r_min = 0.0);

//! Upper bound for cf_power_integral that avoids cancellation: exact where
//! the integral is one-dimensional, a union bound over the axes for
//! products.
double
cf_power_tail_bound(const DistributionSpec& dist, double power, double r_min);

//! (2 pi)^{-d} int |f|^{2m}.
double
lp_norm_cf(const DistributionSpec& dist, int m);

//! (e / 2m)^{d/2} M.
double
lp_norm_envelope(const DistributionSpec& dist, int m);

//! int_{|t| >= eps} |f|^n dt, n >= 2.
double
tail_integral_cf(const DistributionSpec& dist, double eps, int n);

//! (8 pi^2 e / n)^{d/2} M exp{-c^d n min(sigma^2 eps^2, 1) / (M^2 sigma^{2d})}.
double
tail_envelope(const DistributionSpec& dist, double eps, int n, double c);

} // namespace llt
