#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hybtail/errors.hpp"

namespace hybtail {

/// Smooth bijection between an unconstrained internal coordinate and the
/// feasible external value of one parameter. Keeping every iterate feasible
/// this way avoids clamping, which would break the local quadratic model.
struct Transform {
  enum class Kind { Identity, Log, Logistic };
  Kind kind = Kind::Identity;
  double lower = 0.0;
  double upper = 1.0;

  static Transform identity() { return {}; }
  static Transform log() { return {Kind::Log, 0.0, 0.0}; }
  static Transform logistic(double lo, double hi) { return {Kind::Logistic, lo, hi}; }

  double to_external(double t) const {
    switch (kind) {
      case Kind::Identity: return t;
      case Kind::Log: return std::exp(t);
      case Kind::Logistic: return lower + (upper - lower) / (1.0 + std::exp(-t));
    }
    return t;
  }

  double to_internal(double x) const {
    switch (kind) {
      case Kind::Identity: return x;
      case Kind::Log: return std::log(x);
      case Kind::Logistic: {
        double r = (x - lower) / (upper - x);
        r = std::clamp(r, 1e-15, 1e15);  // keep a boundary init finite
        return std::log(r);
      }
    }
    return x;
  }
};

struct LmOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-10;
  double step_tolerance = 1e-12;
  double initial_damping = 1e-3;  // scaled by max diag(J'J)
  double damping_increase = 10.0;
  double damping_decrease = 0.1;
  double jacobian_rel_step = 1e-7;
};

enum class LmStatus { ConvergedGradient, ConvergedStep, MaxIterations };

struct LmProblem {
  /// Writes residual_count residuals for the given external parameters.
  std::function<void(std::span<const double>, std::span<double>)> residuals;
  std::size_t dimension = 0;
  std::size_t residual_count = 0;
  std::vector<Transform> transforms;  // empty means identity everywhere
};

struct LmResult {
  std::vector<double> solution;  // external coordinates
  double objective = 0.0;        // final sum of squared residuals
  int iterations = 0;
  LmStatus status = LmStatus::MaxIterations;
};

namespace detail {

/// Cholesky solve of a small SPD system; returns false if a pivot fails.
inline bool solve_spd(std::vector<double> a, std::span<const double> b,
                      std::span<double> x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        a[i * n + i] = std::sqrt(s);
      } else {
        a[i * n + j] = s / a[j * n + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a[k * n + ii] * x[k];
    x[ii] = s / a[ii * n + ii];
  }
  return true;
}

inline bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

/// Damped Gauss-Newton minimisation of |r(x)|^2 with a finite-difference
/// Jacobian, classical multiplicative damping schedule and per-parameter
/// reparameterisation. Only improving steps are accepted, so the objective
/// sequence is nonincreasing.
inline LmResult lm_solve(const LmProblem& problem, std::span<const double> init,
                         const LmOptions& opts = {}) {
  const std::size_t n = problem.dimension;
  const std::size_t m = problem.residual_count;
  if (n == 0 || m < n)
    throw DomainError("lm_solve: need residual_count >= dimension >= 1");
  if (!problem.transforms.empty() && problem.transforms.size() != n)
    throw DomainError("lm_solve: one transform per parameter");
  if (init.size() != n) throw DomainError("lm_solve: bad init size");

  auto transform = [&](std::size_t j) {
    return problem.transforms.empty() ? Transform::identity() : problem.transforms[j];
  };

  std::vector<double> x(n);  // internal coordinates
  for (std::size_t j = 0; j < n; ++j) x[j] = transform(j).to_internal(init[j]);

  std::vector<double> ext(n), r(m), r_try(m), x_try(n);
  auto eval = [&](const std::vector<double>& xi, std::vector<double>& out) {
    for (std::size_t j = 0; j < n; ++j) ext[j] = transform(j).to_external(xi[j]);
    problem.residuals(ext, out);
    return detail::all_finite(out);
  };

  if (!eval(x, r))
    throw NonFiniteResidual("lm_solve: residuals not finite at the initial point");
  double sse = 0.0;
  for (double v : r) sse += v * v;

  std::vector<double> jac(m * n), a(n * n), a_damped(n * n), g(n), delta(n);
  double lambda = -1.0;
  LmStatus status = LmStatus::MaxIterations;
  int iter = 0;

  for (iter = 1; iter <= opts.max_iterations; ++iter) {
    // Forward-difference Jacobian in internal coordinates.
    for (std::size_t j = 0; j < n; ++j) {
      const double h = opts.jacobian_rel_step * (1.0 + std::abs(x[j]));
      x_try = x;
      x_try[j] = x[j] + h;
      bool ok = eval(x_try, r_try);
      double used = h;
      if (!ok) {  // fall back to a backward probe near a feasibility edge
        x_try[j] = x[j] - h;
        ok = eval(x_try, r_try);
        used = -h;
        if (!ok)
          throw NonFiniteResidual("lm_solve: residuals not finite at a probe point");
      }
      for (std::size_t i = 0; i < m; ++i) jac[i * n + j] = (r_try[i] - r[i]) / used;
    }

    double max_diag = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q <= p; ++q) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += jac[i * n + p] * jac[i * n + q];
        a[p * n + q] = s;
        a[q * n + p] = s;
      }
      max_diag = std::max(max_diag, a[p * n + p]);
    }
    double g_inf = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += jac[i * n + p] * r[i];
      g[p] = s;
      g_inf = std::max(g_inf, std::abs(s));
    }
    if (g_inf < opts.gradient_tolerance) {
      status = LmStatus::ConvergedGradient;
      break;
    }
    if (lambda < 0.0)
      lambda = opts.initial_damping * (max_diag > 0.0 ? max_diag : 1.0);

    const double lambda_cap = 1e32 * (1.0 + max_diag);
    bool accepted = false;
    bool stop = false;
    while (!accepted && !stop) {
      a_damped = a;
      for (std::size_t p = 0; p < n; ++p) a_damped[p * n + p] += lambda;
      std::vector<double> neg_g(n);
      for (std::size_t p = 0; p < n; ++p) neg_g[p] = -g[p];
      if (detail::solve_spd(a_damped, neg_g, delta, n)) {
        double step_norm = 0.0, x_norm = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
          step_norm += delta[p] * delta[p];
          x_norm += x[p] * x[p];
        }
        step_norm = std::sqrt(step_norm);
        x_norm = std::sqrt(x_norm);
        if (step_norm < opts.step_tolerance * (x_norm + opts.step_tolerance)) {
          status = LmStatus::ConvergedStep;
          stop = true;
          break;
        }
        for (std::size_t p = 0; p < n; ++p) x_try[p] = x[p] + delta[p];
        if (eval(x_try, r_try)) {
          double sse_try = 0.0;
          for (double v : r_try) sse_try += v * v;
          if (sse_try < sse) {
            x = x_try;
            r = r_try;
            sse = sse_try;
            lambda = std::max(lambda * opts.damping_decrease, 1e-300);
            accepted = true;
            break;
          }
        }
      }
      lambda *= opts.damping_increase;
      if (lambda > lambda_cap) {
        // Even maximal damping cannot produce a solvable, improving step.
        if (!(max_diag > 0.0))
          throw SingularNormalEquations("lm_solve: normal equations singular");
        status = LmStatus::ConvergedStep;
        stop = true;
      }
    }
    if (stop) break;
  }
  if (iter > opts.max_iterations) iter = opts.max_iterations;

  LmResult res;
  res.solution.resize(n);
  for (std::size_t j = 0; j < n; ++j) res.solution[j] = transform(j).to_external(x[j]);
  res.objective = sse;
  res.iterations = iter;
  res.status = status;
  return res;
}

}  // namespace hybtail
