#pragma once

#include <array>
#include <complex>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llt {

using cplx = std::complex<double>;
using Point = std::span<const double>;
using DensityFn = std::function<double(Point)>;
using CfFn = std::function<cplx(Point)>;
//! E|<theta, X>|^p for a unit vector theta.
using AbsMomentFn = std::function<double(Point theta, double p)>;
//! Density of <theta, X> at s.
using ProjectedDensityFn = std::function<double(Point theta, double s)>;
//! Parameters u at which the density restricted to the line origin + u dir
//! (|dir| = 1) jumps or has a kink.
using LineBreaksFn = std::function<std::vector<double>(Point origin, Point dir)>;

enum class FamilyId
{
  uniform_interval,
  uniform_ball,
  gaussian,
  centered_exponential,
  skewed_triangle,
  logistic,
  product,
  unbounded_marginal,
  symmetrized,
  truncated,
  scaled
};

enum class CfKind
{
  closed_form,
  quadrature //!< pointwise numerical Fourier integral
};

//! Analytic description of the law of one summand: mean zero, covariance
//! sigma2 * I_d. Immutable after construction; all callables are pure.
struct DistributionSpec
{
  FamilyId family = FamilyId::gaussian;
  std::string name;
  int dim = 1;
  double sigma2 = 1.0;
  bool symmetric = false;
  bool third_moments_vanish = false;
  bool log_concave = false;
  bool rotation_invariant = false;
  //! False when some one-dimensional projection has an unbounded density.
  bool bounded_projections = true;
  std::optional<double> support_radius;
  std::optional<double> max_density_closed_form;

  //! Per-axis box [lo, hi] outside which the mass is negligible (< 1e-20).
  double lo = -1.0;
  double hi = 1.0;
  //! 1-d only: points where the density jumps or has a kink.
  std::vector<double> breakpoints;

  DensityFn density;
  CfFn cf;
  CfKind cf_kind = CfKind::closed_form;
  AbsMomentFn abs_moment;
  ProjectedDensityFn projected_density; //!< optional closed form
  std::function<double(double)> radial_density; //!< rotation-invariant only
  LineBreaksFn line_breaks;                     //!< d >= 2, empty if smooth

  std::vector<std::shared_ptr<const DistributionSpec>> components;

  double sigma() const;
  bool has_closed_form_cf() const { return cf_kind == CfKind::closed_form; }
  double pdf(std::initializer_list<double> x) const;
  cplx charfn(std::initializer_list<double> t) const;
  //! Radius of a ball containing all but a negligible part of the mass.
  double extent() const;
};

DistributionSpec
make_uniform_interval(double sigma);

DistributionSpec
make_uniform_ball(int dim, double sigma);

DistributionSpec
make_gaussian(int dim, double sigma);

enum class AsymmetricKind
{
  centered_exponential,
  skewed_triangle
};

DistributionSpec
make_asymmetric_family(AsymmetricKind kind, double sigma);

DistributionSpec
make_asymmetric_family(std::string_view kind, double sigma);

//! Logistic law: smooth, symmetric, log-concave, closed-form CF.
DistributionSpec
make_logistic(double sigma);

//! Independent coordinates, each a 1-d law with the same variance.
DistributionSpec
make_product(const std::vector<DistributionSpec>& components);

//! Uniform law on {|x1| <= exp(-c|x2|)} in the plane. Its joint density is
//! bounded by c/4 but the marginal of x1 is (1/2) log(1/|x1|).
DistributionSpec
make_unbounded_marginal_example(double c);

//! Value of c for which the region example is isotropic, found by
//! bisection on E X1^2 - E X2^2 computed with quadrature.
double
isotropic_unbounded_marginal_c();

//! Law of lambda * X.
DistributionSpec
scaled(const DistributionSpec& dist, double lambda);

//! Density of <theta, X> at s. Uses the closed form when present,
//! otherwise numerical integration over the hyperplane.
double
projected_density(const DistributionSpec& dist, Point theta, double s);

//! Jump and kink parameters of the density along a line; see LineBreaksFn.
std::vector<double>
line_breaks(const DistributionSpec& dist, Point origin, Point dir);

//! Quadrature node x with weight w * p(x).
struct WeightedNode
{
  std::array<double, 3> x{};
  double w = 0.0;
};

//! Composite Gauss-Legendre nodes for integrals E[g(X); |X| < radius],
//! split at the density's jumps along every integration line. Supports
//! d = 1 and d = 2. Nodes with zero density are dropped.
std::vector<WeightedNode>
density_nodes(const DistributionSpec& dist,
              double radius = std::numeric_limits<double>::infinity(),
              int pieces = 6,
              int order = 12);

//! E g(X) for a 1-d law, by adaptive quadrature over [lo, hi] split at the
//! breakpoints.
double
expect_1d(const DistributionSpec& dist,
          const std::function<double(double)>& g,
          double tol = 1e-13);

//! Parameters naming one catalog entry.
struct FamilyParams
{
  std::string id;
  int dim = 1;
  double sigma = 1.0;
  std::vector<std::string> components; //!< product only
  std::optional<double> c;             //!< unbounded-marginal only
};

struct FamilyInfo
{
  std::string id;
  std::string description;
  std::vector<int> dims;
};

//! Constructors keyed by string id.
class FamilyCatalog
{
public:
  static const FamilyCatalog& instance();

  const std::vector<FamilyInfo>& families() const { return infos_; }
  bool contains(std::string_view id) const;
  DistributionSpec make(const FamilyParams& params) const;

private:
  FamilyCatalog();
  std::vector<FamilyInfo> infos_;
};

//! The fixed list of catalog instances used for property checks,
//! all at sigma = 1 except the region example (native scale).
std::vector<DistributionSpec>
standard_catalog();

} // namespace llt
