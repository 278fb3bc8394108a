#pragma once

/**
 * @file numeric_core.hpp
 * @brief Integration domain, adaptive Simpson quadrature, finite differences.
 *
 * The quadrature here is the numerical oracle every closed form in the
 * library is checked against. Integrands in this project are smooth on
 * pieces whose boundaries are known analytically, so callers hand those
 * boundaries to integrate_piecewise instead of relying on detection.
 */

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <concepts>
#include <string>
#include <vector>

#include "glbound/error.hpp"

namespace glbound {

// Closed interval [a, b] with a < b, both finite.
class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw Error(ErrorKind::InvalidArgument, "interval endpoints must be finite");
    }
    if (!(a < b)) {
      throw Error(ErrorKind::InvalidArgument,
                  "interval requires a < b (got a=" + std::to_string(a) +
                      ", b=" + std::to_string(b) + ")");
    }
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double length() const noexcept { return b_ - a_; }
  double midpoint() const noexcept { return a_ + 0.5 * (b_ - a_); }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

struct QuadratureConfig {
  double abs_tol = 1e-10;
  int max_depth = 50;

  void validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
      throw Error(ErrorKind::InvalidArgument, "abs_tol must be positive and finite");
    }
    if (max_depth < 1) {
      throw Error(ErrorKind::InvalidArgument, "max_depth must be >= 1");
    }
  }
};

template <typename F>
concept ScalarFunction = std::invocable<const F&, double> &&
    std::convertible_to<std::invoke_result_t<const F&, double>, double>;

namespace detail {

template <ScalarFunction F>
double checked_call(const F& f, double x) {
  const double y = static_cast<double>(f(x));
  if (!std::isfinite(y)) {
    throw Error(ErrorKind::NonFinite,
                "integrand is not finite at x=" + std::to_string(x));
  }
  return y;
}

// Panels are always split at least this many times, so that integrands whose
// first five samples happen to agree with a low-degree polynomial are still
// resolved.
inline constexpr int kMinSplitDepth = 3;

template <ScalarFunction F>
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(const F& f, int max_depth) : f_(f), max_depth_(max_depth) {}

  double run(double a, double b, double tol) {
    const double fa = checked_call(f_, a);
    const double fb = checked_call(f_, b);
    const double m = 0.5 * (a + b);
    const double fm = checked_call(f_, m);
    const double whole = simpson(a, b, fa, fm, fb);
    return refine(a, b, fa, fm, fb, whole, tol, 0);
  }

 private:
  static double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = checked_call(f_, lm);
    const double frm = checked_call(f_, rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;

    // Below this the refinement difference is rounding noise of the panel.
    const double noise = 64.0 * DBL_EPSILON * (b - a) *
                         (std::abs(fa) + std::abs(flm) + std::abs(fm) +
                          std::abs(frm) + std::abs(fb));
    if (depth >= kMinSplitDepth &&
        (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise)) {
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth_) {
      throw Error(ErrorKind::DepthExhausted,
                  "tolerance not reached on [" + std::to_string(a) + ", " +
                      std::to_string(b) + "] after " + std::to_string(depth) +
                      " bisections");
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  const F& f_;
  int max_depth_;
};

}  // namespace detail

/// Adaptive Simpson quadrature of f over iv. The local error estimate is the
/// difference between one Simpson panel and its two halves; panels are
/// bisected until the estimate drops below their share of cfg.abs_tol (or
/// below the floating-point resolution of the panel).
template <ScalarFunction F>
double integrate(const F& f, const Interval& iv, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  return detail::AdaptiveSimpson<F>(f, cfg.max_depth).run(iv.a(), iv.b(), cfg.abs_tol);
}

/// Integrates piece by piece between sorted, de-duplicated breakpoints.
/// Entries outside the open interval (a, b) are dropped. The absolute
/// tolerance is shared evenly across pieces.
template <ScalarFunction F>
double integrate_piecewise(const F& f, const Interval& iv, std::vector<double> breakpoints,
                           const QuadratureConfig& cfg = {}) {
  cfg.validate();
  std::erase_if(breakpoints, [&](double t) {
    return !std::isfinite(t) || t <= iv.a() || t >= iv.b();
  });
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  std::vector<double> nodes;
  nodes.reserve(breakpoints.size() + 2);
  nodes.push_back(iv.a());
  nodes.insert(nodes.end(), breakpoints.begin(), breakpoints.end());
  nodes.push_back(iv.b());

  QuadratureConfig piece_cfg = cfg;
  piece_cfg.abs_tol = cfg.abs_tol / static_cast<double>(nodes.size() - 1);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    total += integrate(f, Interval(nodes[i], nodes[i + 1]), piece_cfg);
  }
  return total;
}

/// Central second difference (f(x-h) - 2 f(x) + f(x+h)) / h^2.
template <ScalarFunction F>
double second_derivative_fd(const F& f, double x, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::InvalidArgument, "step h must be positive");
  }
  const double lo = detail::checked_call(f, x - h);
  const double mid = detail::checked_call(f, x);
  const double hi = detail::checked_call(f, x + h);
  return (lo - 2.0 * mid + hi) / (h * h);
}

}  // namespace glbound
