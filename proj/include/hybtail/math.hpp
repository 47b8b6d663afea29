#pragma once

#include <cmath>
#include <limits>

#include "hybtail/errors.hpp"

namespace hybtail {

inline constexpr double kSqrt2 = 1.4142135623730950488016887242097;
inline constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

/// Standard normal density.
inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / kSqrt2Pi;
}

inline double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * kSqrt2Pi);
}

/// Standard normal cdf via the complementary error function; absolute
/// accuracy close to machine precision over the whole real line.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / kSqrt2);
}

inline double normal_cdf(double x, double mu, double sigma) {
  return normal_cdf((x - mu) / sigma);
}

namespace detail {

// Rational initial guess for the standard normal quantile (Acklam).
inline double normal_quantile_guess(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

/// Standard normal quantile, polished by Halley steps on erfc so the
/// round trip through normal_cdf holds to a few ulp.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0,1)");
  double x = detail::normal_quantile_guess(p);
  for (int i = 0; i < 2; ++i) {
    const double e = normal_cdf(x) - p;
    const double f = normal_pdf(x);
    if (f <= 0.0) break;
    const double u = e / f;
    x -= u / (1.0 + 0.5 * x * u);  // Halley correction
  }
  return x;
}

inline double normal_quantile(double p, double mu, double sigma) {
  return mu + sigma * normal_quantile(p);
}

/// Upper endpoint of the GPD support: +inf for xi >= 0, -beta/xi otherwise.
inline double gpd_support_upper(double xi, double beta) {
  return xi < 0.0 ? -beta / xi : std::numeric_limits<double>::infinity();
}

namespace detail {

inline void check_gpd_args(double x, double xi, double beta) {
  if (!(beta > 0.0)) throw DomainError("gpd: beta must be positive");
  if (x < 0.0 || x > gpd_support_upper(xi, beta))
    throw DomainError("gpd: excess outside the support");
}

}  // namespace detail

/// GPD cdf of an excess x >= 0. Uses log1p/expm1 so the xi -> 0 limit joins
/// the exponential branch continuously.
inline double gpd_cdf(double x, double xi, double beta) {
  detail::check_gpd_args(x, xi, beta);
  if (xi == 0.0) return -std::expm1(-x / beta);
  return -std::expm1(-std::log1p(xi * x / beta) / xi);
}

inline double gpd_pdf(double x, double xi, double beta) {
  detail::check_gpd_args(x, xi, beta);
  if (xi == 0.0) return std::exp(-x / beta) / beta;
  return std::exp(-(1.0 + 1.0 / xi) * std::log1p(xi * x / beta)) / beta;
}

inline double gpd_quantile(double p, double xi, double beta) {
  if (!(beta > 0.0)) throw DomainError("gpd_quantile: beta must be positive");
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("gpd_quantile: p must lie in [0,1)");
  if (xi == 0.0) return -beta * std::log1p(-p);
  return beta * std::expm1(-xi * std::log1p(-p)) / xi;
}

}  // namespace hybtail
