#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "llt/distributions.hpp"
#include "llt/functionals.hpp"
#include "llt/grid.hpp"
#include "llt/numerics.hpp"

namespace llt {

enum class BoundMode
{
  general,  //!< beta_3, rate n^{-1/2}
  symmetric //!< vanishing third moments, beta_4, rate n^{-1}
};

std::string
to_string(BoundMode mode);

struct BoundConstants
{
  double C = 3.0;
  double c = 0.1;
};

struct Experiment
{
  std::string name;
  std::vector<DistributionSpec> summands; //!< cycled over k = 1..n
  std::vector<long long> n_list;
  std::optional<GridSpec> grid;
  BoundConstants constants;
  BoundMode mode = BoundMode::general;
  double cf_c = 0.125; //!< c in the CF-product envelope

  int dim() const;
  GridSpec effective_grid() const;
  //! Throws PreconditionError / ParameterError on inconsistent fields.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Subadditivity of the maximal density under convolution

struct SubadditivityRecord
{
  std::vector<std::string> names;
  int dim = 1;
  std::vector<double> M_k;
  double M_sum = 0.0;          //!< M(X_1 + ... + X_m)
  double lhs = 0.0;            //!< 1 / M(S)^{2/d}
  double harmonic_rhs = 0.0;   //!< (1/e) sum 1/M_k^{2/d}
  double half_rhs = 0.0;       //!< (1/2) sum 1/M_k^2, d = 1 only
  double geometric_rhs = 0.0;  //!< (prod M_k)^{1/m}
  bool harmonic_ok = false;
  bool half_ok = true;
  bool geometric_ok = false;
  //! Absolute slack allowed on M(S): discretization error of the grid
  //! inversion, or 1e-9 when M(S) came from direct quadrature.
  double slack = 0.0;
  bool by_quadrature = false;
};

//! Holds characteristic functions of a pool of same-dimension laws on one
//! grid so that many sums can be checked cheaply.
class SubadditivityLab
{
public:
  explicit SubadditivityLab(std::vector<DistributionSpec> pool,
                            std::optional<GridSpec> grid = std::nullopt);

  //! Checks the sum of the pool members with the given indices (m >= 2).
  SubadditivityRecord check(const std::vector<std::size_t>& members) const;

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return pool_.size(); }

private:
  std::vector<DistributionSpec> pool_;
  GridSpec grid_;
  std::vector<CharFnGrid> cfs_;
};

SubadditivityRecord
subadditivity_check(const std::vector<DistributionSpec>& dists);

// ---------------------------------------------------------------------------
// CF product approximation

struct CfProductRecord
{
  long long n = 0;
  BoundMode mode = BoundMode::general;
  double c = 0.0;
  double C_min = 0.0;
  double interval = 0.0; //!< smallest sqrt(n)/beta_3(theta) or sqrt(n/beta_4(theta))
  //! C_min on |t| <= 1, evaluated only when the Lyapunov coefficient
  //! exceeds 1 for some probe direction.
  std::optional<double> C_min_unit;
  long long points = 0;
  //! (t, |f_n(t theta_0) - e^{-t^2/2}|) along the first probe direction.
  std::vector<std::pair<double, double>> series;
};

CfProductRecord
cf_product_error_check(const Experiment& exp,
                       long long n,
                       double c,
                       int directions = 16,
                       int samples = 2000);

// ---------------------------------------------------------------------------
// Right-hand sides

//! (C sigma)^d M^2 beta_3 / sqrt(n).
double
theorem11_rhs(const FunctionalReport& report, long long n, int d, double C);

//! (C sigma)^{2d} M^3 beta_4 / n. Requires vanishing third moments.
double
theorem12_rhs(const FunctionalReport& report, long long n, int d, double C);

struct Theorem71Terms
{
  double first = 0.0;  //!< C^d beta / sqrt(n), or C^d beta_4 / n
  double second = 0.0; //!< C^d (prod M_k)^{1/n} exp{...}
  double total() const { return first + second; }
};

//! per_k holds (M_k, sigma_k) for k = 1..n; beta is beta_3 (general mode)
//! or beta_4 (symmetric mode).
Theorem71Terms
theorem71_terms(const std::vector<std::pair<double, double>>& per_k,
                double beta,
                long long n,
                int d,
                double C,
                double c,
                BoundMode mode);

double
theorem71_rhs(const std::vector<std::pair<double, double>>& per_k,
              double beta,
              long long n,
              int d,
              double C,
              double c,
              BoundMode mode);

//! The simplification step from the refined to the basic bound for
//! identical summands: the second summand is compared with
//! C^d c^{-d/2} M^2 sigma^d beta_3 / sqrt(n) (from e^{-x} < x^{-1/2}) or
//! C^d c^{-d} M^3 sigma^{2d} beta_4 / n (from e^{-x} < 1/x).
struct ChainRecord
{
  double M = 0.0, sigma = 0.0, beta = 0.0;
  long long n = 0;
  int d = 1;
  BoundMode mode = BoundMode::general;
  double second = 0.0;
  double majorant = 0.0;
  bool holds = false;
};

ChainRecord
simplification_chain(double M,
                     double sigma,
                     double beta,
                     long long n,
                     int d,
                     double C,
                     double c,
                     BoundMode mode);

// ---------------------------------------------------------------------------
// End-to-end verification

struct DeltaResult
{
  double value = 0.0;
  std::vector<double> argmax;
  double mass_defect = 0.0;
};

//! sup |p_n - phi| for Z_n built from the cycled summands.
DeltaResult
compute_delta_n(const std::vector<DistributionSpec>& summands,
                long long n,
                const GridSpec& grid);

struct BoundRecord
{
  long long n = 0;
  double delta_n = 0.0;
  std::optional<double> rhs_11, rhs_12, rhs_71, rhs_72;
  double ratio = 0.0; //!< delta_n over the mode's Theorem 1.1 right side
  bool feasible = false;
  std::string error; //!< non-empty when the grid pipeline failed
};

struct RateFit
{
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  bool dropped_smallest = false;
  std::size_t points = 0;
};

//! Least squares on (log n, log delta_n). The smallest n is left out when
//! its residual from the fit of the remaining points exceeds three times
//! that fit's RMS.
RateFit
fit_rate(const std::vector<long long>& n, const std::vector<double>& delta);

struct BoundReport
{
  std::string name;
  int dim = 1;
  BoundMode mode = BoundMode::general;
  FunctionalReport functionals;
  std::vector<BoundRecord> records;
  double C_min = 0.0;    //!< Theorem 1.1 form of the mode
  double C_min_71 = 0.0; //!< Theorem 7.1 form at the configured c
  RateFit rate;
};

//! `jobs` > 1 evaluates the n_list concurrently.
BoundReport
verify_bound(const Experiment& exp, int jobs = 1);

struct CorollaryRecord
{
  std::string name;
  double beta3 = 0.0, beta4 = 0.0;
  double beta3_cap = 3.0, beta4_cap = 12.0;
  bool caps_ok = false;
  bool symmetric = false;
  std::vector<long long> n_list;
  std::vector<double> delta;
  double C_d_sqrt = 0.0;                //!< max delta_n sqrt(n)
  std::optional<double> C_d_linear;     //!< max delta_n n, symmetric only
};

//! Requires log-concave summands with sigma = 1.
CorollaryRecord
corollary12_check(const Experiment& exp,
                  double beta3_cap = 3.0,
                  double beta4_cap = 12.0);

} // namespace llt
