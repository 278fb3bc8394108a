#pragma once

/**
 * @file bounds.hpp
 * @brief Error bounds for the lambda-blended rule when |f''|^q is in Q(I).
 *
 * For q >= 1, with M, A, B from coefficients.hpp and g_a = |f''(a)|,
 * g_b = |f''(b)|:
 *
 *   |E(lambda, f)| <= (b - a)^2 / 2 * M^(1 - 1/q)
 *                     * [ (A g_a^q + B g_b^q)^(1/q) + (B g_a^q + A g_b^q)^(1/q) ]
 *
 * The q = 1 case collapses to (b - a)^2 / 2 * C * (g_a + g_b); it is coded
 * separately in corollary_bound_q1. The seven named specialisations at
 * lambda in {0, 1/3, 1/2, 1} are coded verbatim from their printed
 * constants in proposition_bound, so they can be checked against the
 * general path.
 */

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glbound/coefficients.hpp"
#include "glbound/error.hpp"
#include "glbound/expr.hpp"
#include "glbound/kernel_identity.hpp"
#include "glbound/numeric_core.hpp"
#include "glbound/qclass.hpp"

namespace glbound {

struct BoundInput {
  Interval iv;
  double lambda = 0.0;
  double q = 1.0;
  double g_a = 0.0;  // |f''(a)|
  double g_b = 0.0;  // |f''(b)|

  void validate() const {
    detail::check_lambda(lambda);
    if (!(q >= 1.0) || !std::isfinite(q)) {
      throw Error(ErrorKind::InvalidArgument, "q must be a finite value >= 1");
    }
    if (!(g_a >= 0.0) || !(g_b >= 0.0) || !std::isfinite(g_a) || !std::isfinite(g_b)) {
      throw Error(ErrorKind::InvalidArgument, "|f''| endpoint values must be finite and >= 0");
    }
  }
};

namespace detail {

inline void check_curvatures(double g_a, double g_b) {
  if (!(g_a >= 0.0) || !(g_b >= 0.0) || !std::isfinite(g_a) || !std::isfinite(g_b)) {
    throw Error(ErrorKind::InvalidArgument, "|f''| endpoint values must be finite and >= 0");
  }
}

// (b-a)^2/2 * M^(1-1/q) * [(A ga^q + B gb^q)^(1/q) + (B ga^q + A gb^q)^(1/q)]
inline double power_mean_bound(double width, double m, double a_coef, double b_coef, double q,
                               double g_a, double g_b) {
  const double pa = std::pow(g_a, q);
  const double pb = std::pow(g_b, q);
  const double first = std::pow(a_coef * pa + b_coef * pb, 1.0 / q);
  const double second = std::pow(b_coef * pa + a_coef * pb, 1.0 / q);
  return width * width / 2.0 * std::pow(m, 1.0 - 1.0 / q) * (first + second);
}

}  // namespace detail

inline double theorem_bound(const BoundInput& in) {
  in.validate();
  const CoefficientSet c = coefficient_set(in.lambda);
  return detail::power_mean_bound(in.iv.length(), c.m, c.a_coef, c.b_coef, in.q, in.g_a, in.g_b);
}

inline double corollary_bound_q1(const Interval& iv, double lambda, double g_a, double g_b) {
  detail::check_curvatures(g_a, g_b);
  const double w = iv.length();
  return w * w / 2.0 * coeff_total_q1(lambda) * (g_a + g_b);
}

// Named specialisations: P31..P34 are q = 1 forms, P35..P37 hold for any q >= 1.
enum class Proposition { P31, P32, P33, P34, P35, P36, P37 };

inline constexpr Proposition kAllPropositions[] = {
    Proposition::P31, Proposition::P32, Proposition::P33, Proposition::P34,
    Proposition::P35, Proposition::P36, Proposition::P37};

constexpr std::string_view to_string(Proposition p) noexcept {
  switch (p) {
    case Proposition::P31: return "P31";
    case Proposition::P32: return "P32";
    case Proposition::P33: return "P33";
    case Proposition::P34: return "P34";
    case Proposition::P35: return "P35";
    case Proposition::P36: return "P36";
    case Proposition::P37: return "P37";
  }
  return "?";
}

inline double proposition_lambda(Proposition p) noexcept {
  switch (p) {
    case Proposition::P31:
    case Proposition::P35: return 0.0;
    case Proposition::P32:
    case Proposition::P36: return 1.0;
    case Proposition::P33:
    case Proposition::P37: return 1.0 / 3.0;
    case Proposition::P34: return 0.5;
  }
  return 0.0;
}

inline bool proposition_requires_q1(Proposition p) noexcept {
  return p == Proposition::P31 || p == Proposition::P32 || p == Proposition::P33 ||
         p == Proposition::P34;
}

inline double proposition_bound(Proposition p, const Interval& iv, double q, double g_a,
                                double g_b) {
  detail::check_curvatures(g_a, g_b);
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::InvalidArgument, "q must be a finite value >= 1");
  }
  if (proposition_requires_q1(p) && q != 1.0) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(to_string(p)) + " is a q = 1 bound (got q=" + std::to_string(q) + ")");
  }
  const double w2 = iv.length() * iv.length();
  const double ln2 = std::numbers::ln2;
  const double e = std::numbers::e;
  const double sum = g_a + g_b;

  // (first g_a^q + second g_b^q)^(1/q) + (second g_a^q + first g_b^q)^(1/q)
  const auto radicals = [&](double first, double second) {
    const double pa = std::pow(g_a, q);
    const double pb = std::pow(g_b, q);
    return std::pow(first * pa + second * pb, 1.0 / q) +
           std::pow(second * pa + first * pb, 1.0 / q);
  };

  switch (p) {
    case Proposition::P31: return w2 / 4.0 * std::log(4.0 / e) * sum;
    case Proposition::P32: return w2 / 2.0 * std::log(std::exp(0.5)) * sum;
    case Proposition::P33: return w2 / 2.0 * (2.0 / 3.0 * std::log(8.0 / 9.0) + 1.0 / 6.0) * sum;
    case Proposition::P34: return w2 / 4.0 * (std::log(0.5) + 1.0) * sum;
    case Proposition::P35:
      return w2 / 2.0 * std::pow(1.0 / 24.0, 1.0 - 1.0 / q) * radicals(1.0 / 8.0, ln2 - 5.0 / 8.0);
    case Proposition::P36:
      return w2 / 2.0 * std::pow(1.0 / 12.0, 1.0 - 1.0 / q) * radicals(3.0 / 8.0, 1.0 / 8.0);
    case Proposition::P37:
      return w2 / 2.0 * std::pow(1.0 / 81.0, 1.0 - 1.0 / q) *
             radicals(5.0 / 72.0, 2.0 / 3.0 * std::log(8.0 / 9.0) + 7.0 / 72.0);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class MembershipMode {
  Vouched,  // caller holds a proof; reported as Certified
  Scan,     // run the grid falsifier on |f''|^q
  Skip,     // reported as Unchecked
};

struct BoundReport {
  double lambda = 0.0;
  double q = 1.0;
  double g_a = 0.0;
  double g_b = 0.0;
  double lhs_abs = 0.0;
  double bound = 0.0;
  std::optional<double> ratio;  // empty when bound == 0
  Regime regime = Regime::Low;
  MembershipStatus q_membership = MembershipStatus::Unchecked;
  std::optional<QClassReport> membership_report;

  // The inequality is claimed only when the hypothesis is known to hold.
  bool bound_asserted() const noexcept {
    return q_membership == MembershipStatus::Certified ||
           q_membership == MembershipStatus::CheckedPass;
  }
  bool within_bound(double slack = 1e-12) const noexcept { return lhs_abs <= bound + slack; }
};

/// Report for a membership status already decided by the caller (the sweep
/// decides it once per q).
inline BoundReport bound_report_with_status(const Expr& e, const Interval& iv, double lambda,
                                            double q, const QuadratureConfig& cfg,
                                            MembershipStatus status) {
  const RuleParams params(lambda);
  BoundReport r;
  r.lambda = lambda;
  r.q = q;
  r.g_a = std::abs(eval_jet2(e, iv.a()).d2);
  r.g_b = std::abs(eval_jet2(e, iv.b()).d2);
  r.lhs_abs = std::abs(lhs_functional(e, iv, params, cfg));
  r.bound = theorem_bound(BoundInput{iv, lambda, q, r.g_a, r.g_b});
  if (r.bound > 0.0) r.ratio = r.lhs_abs / r.bound;
  r.regime = regime_of(lambda);
  r.q_membership = status;
  return r;
}

inline BoundReport evaluate_bound_report(const Expr& e, const Interval& iv, double lambda,
                                         double q, const QuadratureConfig& cfg,
                                         MembershipMode mode, const QClassOptions& opts = {}) {
  BoundInput{iv, lambda, q, 0.0, 0.0}.validate();
  std::optional<QClassReport> scan;
  MembershipStatus status = MembershipStatus::Unchecked;
  switch (mode) {
    case MembershipMode::Vouched: status = MembershipStatus::Certified; break;
    case MembershipMode::Skip: status = MembershipStatus::Unchecked; break;
    case MembershipMode::Scan:
      scan = membership_for_bound(e, iv, q, opts);
      status = scan->passed ? MembershipStatus::CheckedPass : MembershipStatus::CheckedFail;
      break;
  }
  BoundReport r = bound_report_with_status(e, iv, lambda, q, cfg, status);
  r.membership_report = std::move(scan);
  return r;
}

// ---------------------------------------------------------------------------
// Hermite-Hadamard sanity check
// ---------------------------------------------------------------------------

struct HermiteHadamardReport {
  double lower = 0.0;  // f at the midpoint
  double mid = 0.0;    // mean value of f
  double upper = 0.0;  // endpoint average
  bool holds = false;
};

/// f((a+b)/2) <= mean(f) <= (f(a)+f(b))/2 for convex f. Convexity is
/// required and checked on `samples` points (f'' >= -1e-9).
inline HermiteHadamardReport hermite_hadamard_check(const Expr& e, const Interval& iv,
                                                    const QuadratureConfig& cfg = {},
                                                    int samples = 257) {
  for (int i = 0; i < samples; ++i) {
    const double x = iv.a() + iv.length() * static_cast<double>(i) / (samples - 1);
    const double d2 = eval_jet2(e, i == samples - 1 ? iv.b() : x).d2;
    if (d2 < -1e-9) {
      throw Error(ErrorKind::InvalidArgument,
                  "function is not convex: f''(" + std::to_string(x) + ") = " + std::to_string(d2));
    }
  }
  const auto f = [&e](double x) { return eval(e, x); };
  HermiteHadamardReport r;
  r.lower = f(iv.midpoint());
  r.mid = integrate(f, iv, cfg) / iv.length();
  r.upper = (f(iv.a()) + f(iv.b())) / 2.0;
  const double tol = 10.0 * cfg.abs_tol / iv.length();
  r.holds = r.lower <= r.mid + tol && r.mid <= r.upper + tol;
  return r;
}

}  // namespace glbound
