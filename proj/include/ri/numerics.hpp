#pragma once

#include <functional>

// Scalar special functions and bounded minimization used by the copula and
// estimator layers. All functions are pure and thread-safe.

namespace ri::numerics {

double std_normal_pdf(double x);

// Standard normal CDF. Accepts +-inf. Absolute error < 1e-14.
double std_normal_cdf(double x);

// Inverse of std_normal_cdf on (0,1). Wichura's AS241 rational
// approximation, absolute error below 1e-13.
// Throws std::domain_error for p outside (0,1).
double std_normal_quantile(double p);

// Lower-orthant probability P(Z1 <= x, Z2 <= y) for a standard bivariate
// normal with correlation rho. Gauss-Legendre quadrature over the
// correlation-integral representation (Drezner-Wesolowsky / Genz),
// absolute error around 5e-16. Arguments may be +-inf.
// Throws std::domain_error when |rho| >= 1.
double bvn_cdf(double x, double y, double rho);

// Upper-orthant probability P(Z1 > x, Z2 > y).
double bvn_survival(double x, double y, double rho);

// Regularized incomplete beta I_x(a,b); continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Central Student-t CDF with nu > 0 degrees of freedom.
double student_t_cdf(double t, double nu);

// Inverse of student_t_cdf on (0,1).
double student_t_quantile(double p, double nu);

// Lower-orthant probability of the central bivariate Student-t with
// correlation rho and nu degrees of freedom. Computed by adaptive 1-D
// quadrature of the conditional-t representation; absolute error <= 1e-8.
// Converges to bvn_cdf as nu -> inf.
double bvt_cdf(double x, double y, double rho, double nu);

// Bounded scalar minimization (golden section with parabolic refinement,
// Brent's fminbound). Returns x* in [lo, hi] with |x* - argmin| <= tol for
// unimodal objectives. Throws std::invalid_argument when lo >= hi.
double minimize_scalar_bounded(const std::function<double(double)>& objective,
                               double lo, double hi, double tol = 1e-7);

}  // namespace ri::numerics
