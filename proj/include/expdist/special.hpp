#pragma once

#include <functional>

namespace expdist::special {

// Standard normal CDF via erfc.
double normal_cdf(double z);

// Inverse of the standard normal CDF (Wichura's PPND16 rational
// approximations, full double precision). Requires 0 < p < 1.
double normal_quantile(double p);

// Regularized lower/upper incomplete gamma, P(a,x) and Q(a,x).
// Series expansion below a+1, Lentz continued fraction above.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t: P(|T_dof| >= t).
double student_t_two_sided_p(double t, double dof);

// Upper quantile of Student's t, e.g. level = 0.975 for a 95% CI.
double student_t_quantile(double level, double dof);

// Bracketed Brent root finder: f(lo) and f(hi) must differ in sign.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double xtol_rel = 1e-13, int max_iter = 200);

}  // namespace expdist::special
