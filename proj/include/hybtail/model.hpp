#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "hybtail/errors.hpp"
#include "hybtail/math.hpp"

namespace hybtail {

/// Free parameters of the spliced Gaussian-exponential-GPD distribution.
/// The Gaussian body (mu, sigma) is bridged to a GPD tail starting at u2 by
/// an exponential segment; xi > 0 is the tail index (Frechet regime).
struct ModelParams {
  double mu = 0.0;
  double sigma = 1.0;
  double u2 = 1.0;
  double xi = 0.5;
};

/// Quantities forced by unit mass plus C1 smoothness at both junctions.
struct DerivedParams {
  double beta;    // GPD scale, xi * u2
  double lambda;  // exponential intensity, (1 + xi) / beta
  double u1;      // first junction, mu + lambda * sigma^2
  double gamma1;  // Gaussian weight
  double gamma2;  // exponential weight
  double gamma3;  // GPD weight (tail mass)
};

/// Solves the constraint system for the dependent parameters.
/// Throws InvalidGeometry when the implied u1 exceeds u2, i.e. there is no
/// room for the exponential bridge.
inline DerivedParams derive_params(const ModelParams& th) {
  if (!(th.sigma > 0.0) || !(th.xi > 0.0) || !(th.u2 > 0.0))
    throw DomainError("derive_params: sigma, u2 and xi must be positive");
  const double beta = th.xi * th.u2;
  const double lambda = (1.0 + th.xi) / beta;
  const double u1 = th.mu + lambda * th.sigma * th.sigma;
  if (u1 > th.u2)
    throw InvalidGeometry("derive_params: implied u1 exceeds u2");
  const double z1 = (u1 - th.mu) / th.sigma;
  const double f1 = normal_pdf(u1, th.mu, th.sigma);
  const double big_f1 = normal_cdf(z1);
  const double egap = std::exp(-lambda * (th.u2 - u1));
  // c2 = gamma2 * exp(-lambda*u1); keeping this product avoids overflow and
  // cancellation for small xi.
  const double denom = f1 * (th.xi * egap + 1.0) + lambda * big_f1;
  const double c2 = f1 / denom;
  DerivedParams d;
  d.beta = beta;
  d.lambda = lambda;
  d.u1 = u1;
  d.gamma1 = lambda / denom;
  d.gamma3 = beta * lambda * c2 * egap;
  d.gamma2 = c2 * std::exp(lambda * u1);
  return d;
}

/// Fully derived distribution object; caches the pieces every evaluation
/// needs so pdf/cdf/quantile are single-pass.
struct HybridDist {
  ModelParams theta;
  DerivedParams d;
  double p1;  // cdf at u1
  double p2;  // cdf at u2, equals 1 - gamma3
  double c2;  // gamma2 * exp(-lambda * u1)

  explicit HybridDist(const ModelParams& th) : theta(th), d(derive_params(th)) {
    p1 = d.gamma1 * normal_cdf(d.u1, th.mu, th.sigma);
    p2 = 1.0 - d.gamma3;
    c2 = d.gamma1 * normal_pdf(d.u1, th.mu, th.sigma) / d.lambda;
  }

  double pdf(double x) const {
    if (x <= d.u1) return d.gamma1 * normal_pdf(x, theta.mu, theta.sigma);
    if (x >= theta.u2)
      return d.gamma3 * gpd_pdf(x - theta.u2, theta.xi, d.beta);
    return d.lambda * c2 * std::exp(-d.lambda * (x - d.u1));
  }

  double log_pdf(double x) const {
    if (x <= d.u1) {
      const double z = (x - theta.mu) / theta.sigma;
      return std::log(d.gamma1) - 0.5 * z * z - std::log(theta.sigma * kSqrt2Pi);
    }
    if (x >= theta.u2) {
      const double t = std::log1p(theta.xi * (x - theta.u2) / d.beta);
      return std::log(d.gamma3) - std::log(d.beta) - (1.0 + 1.0 / theta.xi) * t;
    }
    return std::log(d.lambda * c2) - d.lambda * (x - d.u1);
  }

  double cdf(double x) const {
    if (x <= d.u1) return d.gamma1 * normal_cdf(x, theta.mu, theta.sigma);
    if (x >= theta.u2) {
      const double t = std::log1p(theta.xi * (x - theta.u2) / d.beta);
      return 1.0 - d.gamma3 * std::exp(-t / theta.xi);
    }
    return p1 - c2 * std::expm1(-d.lambda * (x - d.u1));
  }

  double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0,1)");
    if (p <= p1)
      return normal_quantile(p / d.gamma1, theta.mu, theta.sigma);
    if (p >= p2) {
      const double t = std::log((1.0 - p) / d.gamma3);
      return theta.u2 + d.beta * std::expm1(-theta.xi * t) / theta.xi;
    }
    return d.u1 + std::log(c2 / (p1 + c2 - p)) / d.lambda;
  }
};

inline double pdf(double x, const ModelParams& th) { return HybridDist(th).pdf(x); }
inline double log_pdf(double x, const ModelParams& th) { return HybridDist(th).log_pdf(x); }
inline double cdf(double x, const ModelParams& th) { return HybridDist(th).cdf(x); }
inline double quantile(double p, const ModelParams& th) { return HybridDist(th).quantile(p); }

namespace detail {

/// Uniform variate in the open interval (0,1), deterministic given the engine
/// state on any platform.
inline double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

/// Inverse-transform sampler; deterministic for a fixed seed.
inline std::vector<double> sample(std::size_t n, const ModelParams& th,
                                  std::uint64_t seed) {
  if (n < 1) throw DomainError("sample: n must be at least 1");
  HybridDist dist(th);
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = dist.quantile(detail::open_uniform(rng));
  return out;
}

/// Two-sided model: two hybrids fitted to the magnitudes on each side of a
/// junction point (0 unless configured otherwise), glued continuously.
struct MixtureModel {
  ModelParams theta_left;
  ModelParams theta_right;
  double alpha1;
  double alpha2;
  double junction = 0.0;
};

/// Weights solving alpha1 + alpha2 = 1 with density continuity
/// alpha1 * h(0; theta_left) = alpha2 * h(0; theta_right).
inline std::pair<double, double> mixture_weights(const ModelParams& left,
                                                 const ModelParams& right) {
  const double h1 = HybridDist(left).pdf(0.0);
  const double h2 = HybridDist(right).pdf(0.0);
  if (h1 + h2 <= 0.0)
    throw DegenerateJunction("mixture_weights: both densities vanish at the junction");
  const double a1 = h2 / (h1 + h2);
  return {a1, 1.0 - a1};
}

inline MixtureModel make_mixture(const ModelParams& left, const ModelParams& right,
                                 double junction = 0.0) {
  auto [a1, a2] = mixture_weights(left, right);
  return MixtureModel{left, right, a1, a2, junction};
}

// Each half is renormalised by its mass above the junction so the mixture
// integrates to one exactly and mixture_cdf(junction) == alpha1; the component
// hybrids may carry a little Gaussian mass below zero that the two-sided
// construction never sees.
inline double mixture_pdf(double x, const MixtureModel& mix) {
  if (x < mix.junction) {
    HybridDist left(mix.theta_left);
    const double upper = 1.0 - left.cdf(0.0);
    return mix.alpha1 * left.pdf(mix.junction - x) / upper;
  }
  HybridDist right(mix.theta_right);
  const double upper = 1.0 - right.cdf(0.0);
  return mix.alpha2 * right.pdf(x - mix.junction) / upper;
}

inline double mixture_cdf(double x, const MixtureModel& mix) {
  if (x < mix.junction) {
    HybridDist left(mix.theta_left);
    const double upper = 1.0 - left.cdf(0.0);
    return mix.alpha1 * (1.0 - left.cdf(mix.junction - x)) / upper;
  }
  HybridDist right(mix.theta_right);
  const double upper = 1.0 - right.cdf(0.0);
  return mix.alpha1 + mix.alpha2 * (right.cdf(x - mix.junction) - right.cdf(0.0)) / upper;
}

}  // namespace hybtail
