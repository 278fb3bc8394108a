#pragma once

/**
 * @file qclass.hpp
 * @brief Sampling-based falsifier for Godunova-Levin class membership.
 *
 * g belongs to Q(I) when g >= 0 and
 *
 *     g(s x + (1 - s) y) <= g(x) / s + g(y) / (1 - s)
 *
 * for all x, y in I and s in (0, 1). The checker scans a finite grid of
 * triples, so a pass is evidence only; a recorded violation is a genuine
 * counterexample.
 *
 * Grids are cell-centred: x_i = a + (i + 1/2)(b - a)/n and s_k = (k + 1/2)/n.
 * A grid of n points is therefore contained in the grid of m points exactly
 * when m is an odd multiple of n.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>
#include <tuple>
#include <vector>

#include "glbound/error.hpp"
#include "glbound/expr.hpp"
#include "glbound/numeric_core.hpp"

namespace glbound {

enum class MembershipStatus { Certified, CheckedPass, CheckedFail, Unchecked };

constexpr std::string_view to_string(MembershipStatus s) noexcept {
  switch (s) {
    case MembershipStatus::Certified: return "Certified";
    case MembershipStatus::CheckedPass: return "CheckedPass";
    case MembershipStatus::CheckedFail: return "CheckedFail";
    case MembershipStatus::Unchecked: return "Unchecked";
  }
  return "?";
}

enum class ViolationKind {
  Negative,    // g(x) < -tol; stored as lhs = 0, rhs = g(x), y = x, lambda = 0
  Inequality,  // the defining inequality fails at (x, y, lambda)
};

struct Violation {
  double x = 0.0;
  double y = 0.0;
  double lambda = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  ViolationKind kind = ViolationKind::Inequality;

  double margin() const noexcept { return lhs - rhs; }

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct QClassReport {
  std::size_t samples_checked = 0;
  std::vector<Violation> violations;  // sorted by (x, y, lambda)
  double max_margin = -std::numeric_limits<double>::infinity();
  bool passed = true;
};

struct QClassOptions {
  int grid_n = 64;
  double tol = 1e-12;

  void validate() const {
    if (grid_n < 2) throw Error(ErrorKind::InvalidArgument, "grid_n must be >= 2");
    if (!(tol > 0.0) || !std::isfinite(tol)) {
      throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    }
  }
};

template <ScalarFunction G>
QClassReport check_godunova_levin(const G& g, const Interval& iv, const QClassOptions& opts = {}) {
  opts.validate();
  const auto n = static_cast<std::size_t>(opts.grid_n);
  const double h = iv.length() / static_cast<double>(n);

  std::vector<double> xs(n), gs(n), ls(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = iv.a() + (static_cast<double>(i) + 0.5) * h;
    gs[i] = detail::checked_call(g, xs[i]);
    ls[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }

  QClassReport report;
  for (std::size_t i = 0; i < n; ++i) {
    const double margin = -gs[i];
    report.max_margin = std::max(report.max_margin, margin);
    if (gs[i] < -opts.tol) {
      report.violations.push_back({xs[i], xs[i], 0.0, 0.0, gs[i], ViolationKind::Negative});
    }
  }
  report.samples_checked = n;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double s = ls[k];
        const double lhs = detail::checked_call(g, s * xs[i] + (1.0 - s) * xs[j]);
        const double rhs = gs[i] / s + gs[j] / (1.0 - s);
        report.max_margin = std::max(report.max_margin, lhs - rhs);
        if (lhs > rhs + opts.tol) {
          report.violations.push_back({xs[i], xs[j], s, lhs, rhs, ViolationKind::Inequality});
        }
      }
    }
  }
  report.samples_checked += n * n * n;

  std::sort(report.violations.begin(), report.violations.end(),
            [](const Violation& l, const Violation& r) {
              return std::tie(l.x, l.y, l.lambda, l.kind) < std::tie(r.x, r.y, r.lambda, r.kind);
            });
  report.passed = report.violations.empty();
  return report;
}

/// x -> |f''(x)|^q, the function whose membership the bound theorem requires.
inline auto curvature_power(const Expr& e, double q) {
  return [e, q](double x) { return std::pow(std::abs(eval_jet2(e, x).d2), q); };
}

inline QClassReport membership_for_bound(const Expr& e, const Interval& iv, double q,
                                         const QClassOptions& opts = {}) {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::InvalidArgument, "q must be a finite value >= 1");
  }
  return check_godunova_levin(curvature_power(e, q), iv, opts);
}

/// Sampled witness that g is nonnegative and convex on iv: every sample is
/// >= 0 and every second difference on a uniform (samples)-point grid is >=
/// -tol scaled by the largest sample. Nonnegative convex functions belong to
/// Q(I), which is what makes this a shortcut for the triple scan.
template <ScalarFunction G>
bool nonneg_convex_witness(const G& g, const Interval& iv, int samples = 257,
                           double tol = 1e-9) {
  if (samples < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 samples");
  std::vector<double> v(static_cast<std::size_t>(samples));
  const double h = iv.length() / static_cast<double>(samples - 1);
  double scale = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = i + 1 == v.size() ? iv.b() : iv.a() + static_cast<double>(i) * h;
    v[i] = detail::checked_call(g, x);
    if (v[i] < 0.0) return false;
    scale = std::max(scale, v[i]);
  }
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i - 1] - 2.0 * v[i] + v[i + 1] < -tol * scale) return false;
  }
  return true;
}

}  // namespace glbound
