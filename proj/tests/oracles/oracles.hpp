#pragma once

// Reference values computed without the lab library: closed forms, composite
// Simpson rules in long double and dense scans.

#include <functional>
#include <string>
#include <vector>

namespace oracle {

//! Composite Simpson rule on [a, b] with `intervals` (even) panels.
long double
simpson(const std::function<long double(long double)>& f,
        long double a,
        long double b,
        int intervals);

//! Simpson over consecutive pieces [cuts[i], cuts[i + 1]].
long double
simpson_pieces(const std::function<long double(long double)>& f,
               const std::vector<long double>& cuts,
               int intervals_per_piece);

double uniform_beta3();                  // E|X|^3, X uniform with variance 1
double uniform_beta3_quadrature();
double gaussian_abs_moment(double p);    // E|N(0,1)|^p
double exponential_beta3();              // 12/e - 2
double exponential_beta3_quadrature();
double skewed_triangle_third_moment();   // E X^3 by quadrature
double ball_radius_d2();                 // r with E X_1^2 = 1, by polar quadrature
double region_isotropy_c();              // bisection on E X1^2 - E X2^2
double region_cross_moment(double c);    // E X1 X2

//! Density of (U_1 + ... + U_n)/sqrt(n), U_k uniform on [-sqrt3, sqrt3].
long double
uniform_sum_density(int n, long double x);

//! Density of (G - n)/sqrt(n) with G ~ Gamma(n, 1).
long double
gamma_sum_density(int n, long double x);

//! sup |p - phi| on a uniform grid of `points` nodes over [-a, a].
double
sup_gap(const std::function<long double(long double)>& p, double a, long long points);

double uniform_delta(int n);     // Irwin-Hall based
double exponential_delta(int n); // Gamma based

//! Peak of the n = 2 uniform sum, 1/sqrt(6).
double triangle_peak();

//! max_x int p_U(y) phi(x - y) dy for U uniform with variance 1.
double uniform_gaussian_conv_max();

//! C_min of the CF product envelope on a dense grid, d = 1 closed forms.
//! kind: "uniform" (t^4 envelope with beta_4) or "centered-exponential"
//! (|t|^3 envelope with beta_3).
double cf_product_cmin(const std::string& kind, int n, double c, long long points);

//! sup over 4096 directions of E|<theta, X>|^3 for X = (U, L) with U
//! uniform and L logistic, both of variance 1.
double product_beta3_dense_scan();

double theorem11_fixture(); // C = 1, d = 1, uniform, n = 16
double theorem71_mixed_fixture();

//! int_{|t| >= eps} e^{-n t^2 / 2} dt.
double gaussian_cf_tail(double eps, int n);

//! (2 pi)^{-1} int (sin t / t)^{2m} dt by direct quadrature.
double uniform_cf_l2m(int m);

struct Fixture
{
  std::string id;
  std::string description;
  std::function<double()> compute;
};

//! Every regenerable fixture, keyed by id.
const std::vector<Fixture>&
registry();

} // namespace oracle
