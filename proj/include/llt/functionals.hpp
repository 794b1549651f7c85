#pragma once

#include <optional>
#include <string>
#include <vector>

#include "llt/distributions.hpp"

namespace llt {

//! Scalar functionals of one summand law, or of a list of summands cycled
//! over n terms.
struct FunctionalReport
{
  std::string family;
  int dim = 1;
  long long n = 1;
  double M = 0.0;     //!< max_k M(X_k)
  double sigma = 0.0; //!< max_k sigma_k
  double beta3 = 0.0;
  double beta4 = 0.0;
  double beta3_lattice = 0.0; //!< before local ascent
  double beta4_lattice = 0.0;
  double isotropic_const = 0.0; //!< M^{1/d} sigma
  bool third_moments_vanish = false; //!< for every summand
  double L3 = 0.0;
  double L4 = 0.0;
  std::vector<double> theta_star3;
  std::vector<double> theta_star4;
};

//! ess sup of the joint density: closed form when known, otherwise a grid
//! maximum refined by a parabola along each axis.
double
max_density(const DistributionSpec& dist);

//! Maximum of the density of <theta, X>. Throws UnboundedDensity when the
//! law is flagged as having an unbounded one-dimensional projection.
double
marginal_max_density(const DistributionSpec& dist, Point theta);

//! (1/n) sum_k E|<theta, X_k>|^p with X_k cycling through `dists`.
double
beta_p_directional(const std::vector<DistributionSpec>& dists,
                   long long n,
                   Point theta,
                   int p);

struct DirectionalSup
{
  double value = 0.0;   //!< after local ascent
  double lattice = 0.0; //!< best value on the initial lattice
  std::vector<double> theta;
};

//! sup over the unit sphere of beta_p_directional. Exact in d = 1; in
//! d = 2, 3 a lattice of at least 512 directions followed by local ascent.
DirectionalSup
beta_p_sup(const std::vector<DistributionSpec>& dists, long long n, int p);

//! L_p = n^{-(p - 2)/2} beta_p.
double
lyapunov_L(const std::vector<DistributionSpec>& dists, long long n, int p);

//! Volume of the unit ball in R^d.
double
ball_volume(int d);

struct IsotropyMargins
{
  std::optional<double> interval; //!< M^2 sigma^2 - 1/12, d = 1 only
  double ball = 0.0;     //!< M^{2/d} sigma^2 - omega_d^{-2/d}/(d + 2)
  double gaussian = 0.0; //!< M^{2/d} sigma^2 - 1/(2 pi e)
  bool ok(double tol = 1e-9) const
  {
    return interval.value_or(0.0) >= -tol && ball >= -tol && gaussian >= -tol;
  }
};

IsotropyMargins
check_isotropic_bounds(const DistributionSpec& dist);

FunctionalReport
functional_report(const std::vector<DistributionSpec>& dists, long long n = 1);

//! Unit directions used for sphere scans: `count` equally spaced angles in
//! d = 2 and a Fibonacci spiral in d = 3. In d = 1 returns {+1, -1}.
std::vector<std::vector<double>>
sphere_directions(int dim, int count);

} // namespace llt
