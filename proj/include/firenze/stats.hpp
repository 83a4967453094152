#pragma once

namespace firenze {

// Regularized incomplete beta function I_x(a, b) for a > 0, b > 0 and
// x in [0, 1].  Continued-fraction evaluation, absolute error well below
// 1e-13 across the parameter ranges the t-test produces.
double regularized_incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t distribution with df > 0 degrees of freedom.
double student_t_cdf(double t, double df);

// Two-sided tail probability P(|T| >= |t|) with df > 0 degrees of freedom,
// computed as I_x(df/2, 1/2) with x = df / (df + t^2).
double student_t_two_sided_p(double t, double df);

} // namespace firenze
