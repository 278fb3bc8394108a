#pragma once

/**
 * @file coefficients.hpp
 * @brief Closed-form kernel integrals that weight |f''(a)|^q and |f''(b)|^q.
 *
 * With the half kernel w(t) = |t (t - lambda)| on [0, 1/2]:
 *
 *   M(lambda) = int w(t) dt
 *   A(lambda) = int w(t) / t dt           weight of |f''(a)|^q
 *   B(lambda) = int w(t) / (1 - t) dt     weight of |f''(b)|^q
 *   C(lambda) = A + B                     the q = 1 total
 *
 * The right half (1 - t)|1 - lambda - t| on [1/2, 1] is the reflection of w,
 * so it yields the same M and the same pair with A and B exchanged.
 *
 * Each quantity has one formula for lambda <= 1/2 (Low) and one for
 * lambda > 1/2 (High). The two agree at lambda = 1/2, which is dispatched
 * to Low.
 */

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "glbound/error.hpp"

namespace glbound {

enum class Regime { Low, High };

constexpr std::string_view to_string(Regime r) noexcept {
  return r == Regime::Low ? "Low" : "High";
}

struct CoefficientSet {
  double m = 0.0;
  double a_coef = 0.0;
  double b_coef = 0.0;
  double c_q1 = 0.0;
  Regime regime = Regime::Low;
};

namespace detail {

inline void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "lambda must lie in [0, 1] (got " + std::to_string(lambda) + ")");
  }
}

}  // namespace detail

inline Regime regime_of(double lambda) {
  detail::check_lambda(lambda);
  return lambda <= 0.5 ? Regime::Low : Regime::High;
}

// Branch formulas. These evaluate the named branch for any lambda in [0, 1];
// the dispatching versions below pick the branch that is valid.

inline double moment_M(double lambda, Regime branch) {
  detail::check_lambda(lambda);
  if (branch == Regime::Low) return lambda * lambda * lambda / 3.0 + (1.0 - 3.0 * lambda) / 24.0;
  return (3.0 * lambda - 1.0) / 24.0;
}

inline double coeff_A(double lambda, Regime branch) {
  detail::check_lambda(lambda);
  if (branch == Regime::Low) return lambda * lambda - (4.0 * lambda - 1.0) / 8.0;
  return (4.0 * lambda - 1.0) / 8.0;
}

// Low branch: (1 - lambda) ln(2 (1 - lambda)^2) + (20 lambda - 8 lambda^2 - 5) / 8.
// The log argument is at least 1/2 while lambda <= 1/2; at lambda = 1 the
// product is taken as its limit 0.
inline double coeff_B(double lambda, Regime branch) {
  detail::check_lambda(lambda);
  if (branch == Regime::Low) {
    const double s = 1.0 - lambda;
    const double log_term = s == 0.0 ? 0.0 : s * std::log(2.0 * s * s);
    return log_term + (20.0 * lambda - 8.0 * lambda * lambda - 5.0) / 8.0;
  }
  return (5.0 - 4.0 * lambda) / 8.0 - (lambda - 1.0) * std::log(0.5);
}

inline double coeff_total_q1(double lambda, Regime branch) {
  detail::check_lambda(lambda);
  if (branch == Regime::Low) {
    const double s = 1.0 - lambda;
    const double log_term = s == 0.0 ? 0.0 : s * std::log(2.0 * s * s);
    return log_term + (16.0 * lambda - 4.0) / 8.0;
  }
  return (lambda - 1.0) * std::numbers::ln2 + 0.5;
}

inline double moment_M(double lambda) { return moment_M(lambda, regime_of(lambda)); }
inline double coeff_A(double lambda) { return coeff_A(lambda, regime_of(lambda)); }
inline double coeff_B(double lambda) { return coeff_B(lambda, regime_of(lambda)); }
inline double coeff_total_q1(double lambda) { return coeff_total_q1(lambda, regime_of(lambda)); }

inline CoefficientSet coefficient_set(double lambda) {
  const Regime r = regime_of(lambda);
  CoefficientSet s{moment_M(lambda, r), coeff_A(lambda, r), coeff_B(lambda, r),
                   coeff_total_q1(lambda, r), r};
  // The q = 1 total is an independent coding of A + B.
  if (std::abs(s.c_q1 - (s.a_coef + s.b_coef)) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument,
                "coefficient inconsistency at lambda=" + std::to_string(lambda));
  }
  return s;
}

}  // namespace glbound
