#pragma once

// Error functional of the lambda-blended midpoint/trapezoid rule and its
// representation as a kernel-weighted integral of f''.
//
//   E(lambda, f) = (lambda - 1) f(m) - lambda (f(a) + f(b)) / 2 + mean of f over [a, b]
//                = (b - a)^2 * int_0^1 k(t) f''(t a + (1 - t) b) dt

#include <cmath>
#include <string>

#include "glbound/error.hpp"
#include "glbound/expr.hpp"
#include "glbound/numeric_core.hpp"

namespace glbound {

// Rule parameter lambda in [0, 1]: 0 midpoint, 1/3 Simpson, 1/2 averaged, 1 trapezoid.
class RuleParams {
 public:
  explicit RuleParams(double lambda) : lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument,
                  "lambda must lie in [0, 1] (got " + std::to_string(lambda) + ")");
    }
  }
  double lambda() const noexcept { return lambda_; }

 private:
  double lambda_;
};

struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
};

/// Piecewise quadratic kernel
///   k(t) = t (t - lambda) / 2                  on [0, 1/2]
///   k(t) = (1 - t)(1 - lambda - t) / 2         on (1/2, 1]
/// The second branch is evaluated as the reflection s (s - lambda) / 2 with
/// s = 1 - t, so both branches give the same bits at t = 1/2.
inline double kernel_k(double t, const RuleParams& p) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "kernel argument t must lie in [0, 1]");
  }
  const double lambda = p.lambda();
  const double s = t <= 0.5 ? t : 1.0 - t;
  return 0.5 * s * (s - lambda);
}

inline double lhs_functional(const Expr& e, const Interval& iv, const RuleParams& p,
                             const QuadratureConfig& cfg = {}) {
  const double lambda = p.lambda();
  const auto f = [&e](double x) { return eval(e, x); };
  const double mean = integrate(f, iv, cfg) / iv.length();
  return (lambda - 1.0) * f(iv.midpoint()) - lambda * (f(iv.a()) + f(iv.b())) / 2.0 + mean;
}

inline double rhs_identity(const Expr& e, const Interval& iv, const RuleParams& p,
                           const QuadratureConfig& cfg = {}) {
  const double a = iv.a();
  const double b = iv.b();
  const auto integrand = [&](double t) {
    return kernel_k(t, p) * eval_jet2(e, t * a + (1.0 - t) * b).d2;
  };
  const double lambda = p.lambda();
  const double weighted =
      integrate_piecewise(integrand, Interval(0.0, 1.0), {lambda, 0.5, 1.0 - lambda}, cfg);
  return iv.length() * iv.length() * weighted;
}

inline IdentityReport verify_identity(const Expr& e, const Interval& iv, const RuleParams& p,
                                      const QuadratureConfig& cfg = {}) {
  IdentityReport r;
  r.lhs = lhs_functional(e, iv, p, cfg);
  r.rhs = rhs_identity(e, iv, p, cfg);
  r.abs_diff = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace glbound
