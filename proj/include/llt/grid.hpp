#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "llt/distributions.hpp"

namespace llt {

//! Uniform tensor grid on [-L, L)^d with N points per axis. The spatial
//! step is h = 2L/N; the dual frequency grid has step pi/L and spans
//! [-T_max, T_max) with T_max = pi N / (2L).
struct GridSpec
{
  int dim = 1;
  double half_width = 12.0;
  long long points_per_axis = 4096;

  double step() const { return 2.0 * half_width / points_per_axis; }
  double freq_step() const;
  double t_max() const;
  long long size() const;
  double x(long long j) const { return -half_width + j * step(); }
  double t(long long k) const
  {
    return (k - points_per_axis / 2) * freq_step();
  }

  //! Throws ParameterError on invalid fields and WindowError when
  //! t_max() < required_window. Also enforces the LLT_LAB_MAX_GRID_MB cap.
  void validate(double required_window = 0.0) const;
};

//! Default grid for the given dimension and variance scale.
GridSpec
default_grid(int dim, double sigma = 1.0);

struct DensityGrid
{
  GridSpec spec;
  std::vector<double> values;
  double mass_defect = 0.0;

  double max_value() const;
  //! Values with negative ringing clamped to 0.
  std::vector<double> clamped() const;
};

enum class CfSource
{
  analytic,
  transformed
};

enum class CfPreference
{
  automatic,
  analytic,
  transformed
};

struct CharFnGrid
{
  GridSpec spec;
  std::vector<cplx> values;
  CfSource source = CfSource::analytic;

  const cplx& at_origin() const;
  //! max |f(-t) - conj f(t)| over index pairs that are both on the grid.
  double hermitian_defect() const;
};

//! Row-major multi-index helper.
std::vector<long long>
unravel(long long flat, int dim, long long n);

CharFnGrid
cf_on_grid(const DistributionSpec& dist,
           const GridSpec& spec,
           CfPreference preference = CfPreference::automatic,
           double required_window = 0.0);

//! Characteristic function of lambda_sum * (X_1 + ... + X_n) where the
//! X_k cycle through `dists`. With the default scale this is the CF of
//! Z_n = (X_1 + ... + X_n) / sqrt(n).
CharFnGrid
product_cf(const std::vector<DistributionSpec>& dists,
           long long n,
           const GridSpec& spec,
           double scale = 0.0,
           CfPreference preference = CfPreference::automatic);

struct InversionOptions
{
  //! Largest admissible (2 pi)^{-d} * int_{|t| > T_max} |f| (estimated).
  double max_tail = 1e-6;
  //! Refuse CFs whose modulus does not decay faster than |t|^{-d}.
  bool refuse_nonintegrable = true;
};

struct WindowTail
{
  double tail = 0.0; //!< estimated (2 pi)^{-d} int_{|t| > T_max} |f| dt
  bool integrable = true;
};

WindowTail
estimate_window_tail(const CharFnGrid& cf, double power = 1.0);

DensityGrid
invert_to_density(const CharFnGrid& cf, const InversionOptions& options = {});

struct SupDistance
{
  double value = 0.0;      //!< refined sup |p - q|
  double grid_value = 0.0; //!< max over grid nodes
  std::vector<double> argmax;
};

SupDistance
sup_distance(const DensityGrid& p,
             const std::function<double(Point)>& q_analytic);

//! Standard normal density in R^d.
double
standard_normal_density(Point x);

// Flat binary layout: "LLTG" | u32 version | u32 dtype (1 = f64, 2 = c128)
// | u32 dim | u64 N | f64 L | row-major values (little endian).
void
write_binary(std::ostream& out, const DensityGrid& grid);
void
write_binary(std::ostream& out, const CharFnGrid& grid);
DensityGrid
read_density_binary(std::istream& in);
CharFnGrid
read_cf_binary(std::istream& in);

void
write_csv(std::ostream& out, const DensityGrid& grid);
void
write_csv(std::ostream& out, const CharFnGrid& grid);

} // namespace llt
