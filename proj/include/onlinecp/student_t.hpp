#pragma once

namespace onlinecp {

/// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

double t_pdf(double x, double df);

/// Student-t distribution function. Exactly symmetric:
/// t_cdf(-x, df) == 1 - t_cdf(x, df) up to one rounding.
double t_cdf(double x, double df);

/// Upper tail P(T > x), computed without cancellation for large x.
double t_sf(double x, double df);

/// Upper delta point: the t with P(T > t) = delta. Requires 0 < delta < 1.
double t_upper_point(double delta, double df);

}  // namespace onlinecp
