#pragma once

// Special functions used by the z-test and Welch t-test machinery.

namespace acctest::special {

/// Standard normal CDF. Absolute error below 1e-15 on the real line.
double normal_cdf(double x);

/// Upper tail 1 - Phi(x), computed without cancellation.
double normal_sf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Inverse of normal_cdf (Wichura AS241, ~1e-16 relative). Returns -inf at 0
/// and +inf at 1; throws DomainError outside [0,1].
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// P(T > t) for Student t with `df` degrees of freedom (df > 0, may be
/// fractional). Accepts t = +-inf.
double student_t_sf(double t, double df);

/// P(|T| >= |t|).
double student_t_two_sided(double t, double df);

}  // namespace acctest::special
