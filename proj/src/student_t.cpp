#include "onlinecp/student_t.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "onlinecp/error.hpp"

namespace onlinecp {

namespace {

constexpr double kFpMin = 1e-300;
constexpr double kCfEps = 1e-16;
constexpr int kCfMaxIter = 10000;

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kCfMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kCfEps) return h;
  }
  throw NumericalError("incomplete_beta: continued fraction did not converge");
}

void require_df(double df) {
  if (!(df > 0.0)) throw UsageError("Student-t: degrees of freedom must be > 0");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw UsageError("incomplete_beta: shape parameters must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw UsageError("incomplete_beta: x outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fast for x < (a + 1) / (a + b + 2); otherwise use
  // I_x(a, b) = 1 - I_{1-x}(b, a).
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_pdf(double x, double df) {
  require_df(df);
  const double log_norm = std::lgamma(0.5 * (df + 1.0)) -
                          std::lgamma(0.5 * df) -
                          0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

double t_sf(double x, double df) {
  require_df(df);
  if (std::isnan(x)) return x;
  if (x < 0.0) return 1.0 - t_sf(-x, df);
  if (std::isinf(x)) return 0.0;
  const double x2 = x * x;
  if (x2 < 1.0) {
    // P(|T| < x) = I_{x^2/(df+x^2)}(1/2, df/2)
    return 0.5 - 0.5 * incomplete_beta(0.5, 0.5 * df, x2 / (df + x2));
  }
  // P(|T| > x) = I_{df/(df+x^2)}(df/2, 1/2)
  return 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + x2));
}

double t_cdf(double x, double df) {
  require_df(df);
  if (std::isnan(x)) return x;
  if (x >= 0.0) return 1.0 - t_sf(x, df);
  return t_sf(-x, df);
}

double t_upper_point(double delta, double df) {
  require_df(df);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw UsageError("t_upper_point: delta must lie in (0, 1)");
  }
  if (delta == 0.5) return 0.0;
  if (delta > 0.5) return -t_upper_point(1.0 - delta, df);

  if (df == 1.0) return std::tan(std::numbers::pi * (0.5 - delta));
  if (df == 2.0) return (1.0 - 2.0 * delta) / std::sqrt(2.0 * delta * (1.0 - delta));

  // Bracket [lo, hi] with t_sf(lo) > delta >= t_sf(hi).
  double lo = 0.0;
  double hi = 1.0;
  while (t_sf(hi, df) > delta) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalError("t_upper_point: bracketing failed");
  }
  // Newton on t_sf(t) - delta, falling back to bisection outside the bracket.
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 500; ++iter) {
    const double f = t_sf(t, df) - delta;
    if (f == 0.0) return t;
    if (f > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    const double density = t_pdf(t, df);
    double next = density > 0.0 ? t + f / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                   std::fmax(1.0, std::fabs(t)) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      return next;
    }
    t = next;
  }
  return t;
}

}  // namespace onlinecp
