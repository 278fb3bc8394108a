#pragma once

// Command-line front end. `run_cli` takes the full argument vector and the
// two output streams so the whole command surface can be driven in-process.
//
// Exit codes: 0 success/pass, 1 property fail, 2 input error,
//             3 membership fail, 4 i/o error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "glbound/glbound.hpp"
#include "json.hpp"

namespace glbound::cli {

enum ExitCode : int {
  kOk = 0,
  kPropertyFail = 1,
  kInputError = 2,
  kMembershipFail = 3,
  kIoError = 4,
};

// 17 significant digits: round-trip safe.
inline std::string fmt17(double v) { return fmt::format("{:.17g}", v); }
// Human summaries.
inline std::string fmt6(double v) { return fmt::format("{:.6g}", v); }

struct LambdaGrid {
  double start = 0.0;
  double end = 1.0;
  double step = 0.1;

  /// Values start + k * step up to end. `end` itself is included when
  /// (end - start) / step is integral within 1e-9.
  std::vector<double> values() const {
    const double r = (end - start) / step;
    const auto count = static_cast<long>(std::floor(r + 1e-9));
    const bool hits_end = std::abs(r - std::round(r)) <= 1e-9;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count) + 1);
    for (long k = 0; k <= count; ++k) {
      double v = start + static_cast<double>(k) * step;
      if (k == count && hits_end) v = end;
      out.push_back(std::min(v, end));
    }
    return out;
  }
};

inline double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidArgument, "cannot parse " + what + " from '" + text + "'");
  }
  return v;
}

/// Parses "S:E:STEP" with 0 <= S <= E <= 1 and STEP > 0.
inline LambdaGrid parse_lambda_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) {
    throw Error(ErrorKind::InvalidArgument, "lambda grid must look like START:END:STEP");
  }
  LambdaGrid g{parse_real(parts[0], "grid start"), parse_real(parts[1], "grid end"),
               parse_real(parts[2], "grid step")};
  if (!(g.start >= 0.0 && g.start <= g.end && g.end <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "lambda grid needs 0 <= START <= END <= 1");
  }
  if (!(g.step > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda grid STEP must be > 0");
  return g;
}

inline std::string csv_header() { return "lambda,q,regime,lhs_abs,bound,ratio,membership"; }

inline std::string csv_row(const BoundReport& r) {
  return fmt::format("{},{},{},{},{},{},{}", fmt17(r.lambda), fmt17(r.q), to_string(r.regime),
                     fmt17(r.lhs_abs), fmt17(r.bound), r.ratio ? fmt17(*r.ratio) : "",
                     to_string(r.q_membership));
}

inline nlohmann::ordered_json json_row(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["lambda"] = r.lambda;
  j["q"] = r.q;
  j["regime"] = std::string(to_string(r.regime));
  j["lhs_abs"] = r.lhs_abs;
  j["bound"] = r.bound;
  j["ratio"] = r.ratio ? nlohmann::ordered_json(*r.ratio) : nlohmann::ordered_json(nullptr);
  j["membership"] = std::string(to_string(r.q_membership));
  return j;
}

inline nlohmann::ordered_json corpus_json() {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : corpus_entries()) {
    nlohmann::ordered_json j;
    j["name"] = e.name;
    j["expression"] = e.expression;
    j["interval"] = {e.interval.a(), e.interval.b()};
    j["membership"] = std::string(to_string(e.membership));
    j["note"] = e.note;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline void print_violation(std::ostream& out, const Violation& v) {
  if (v.kind == ViolationKind::Negative) {
    out << "  negative value g(" << fmt6(v.x) << ") = " << fmt6(v.rhs) << "\n";
    return;
  }
  out << "  x=" << fmt6(v.x) << " y=" << fmt6(v.y) << " lambda=" << fmt6(v.lambda)
      << " lhs=" << fmt6(v.lhs) << " rhs=" << fmt6(v.rhs) << " margin=" << fmt6(v.margin())
      << "\n";
}

/// Summary plus the (up to) ten violations with the largest margin.
inline void print_qclass_report(std::ostream& out, const QClassReport& r) {
  out << "samples     " << r.samples_checked << "\n"
      << "violations  " << r.violations.size() << "\n"
      << "max_margin  " << fmt6(r.max_margin) << "\n"
      << "status      " << (r.passed ? "pass" : "fail") << "\n";
  if (r.violations.empty()) return;
  std::vector<Violation> worst = r.violations;
  std::stable_sort(worst.begin(), worst.end(), [](const Violation& l, const Violation& rr) {
    return l.margin() > rr.margin();
  });
  if (worst.size() > 10) worst.resize(10);
  out << "largest violations:\n";
  for (const auto& v : worst) print_violation(out, v);
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Error bounds for lambda-blended midpoint/trapezoid quadrature", "glbound"};
  app.require_subcommand(1);

  // verify-identity
  std::string fn;
  double a = 0.0, b = 1.0, lambda = 0.0, q = 1.0, tol = 1e-8;
  auto* verify = app.add_subcommand("verify-identity", "Check the kernel identity for E(lambda, f)");
  verify->add_option("--fn", fn, "Function of x")->required();
  verify->add_option("--a", a, "Left endpoint")->required();
  verify->add_option("--b", b, "Right endpoint")->required();
  verify->add_option("--lambda", lambda, "Rule parameter in [0,1]")->required();
  verify->add_option("--tol", tol, "Pass threshold for |lhs - rhs|")->capture_default_str();

  // coeffs
  bool as_json = false;
  auto* coeffs = app.add_subcommand("coeffs", "Print M, A, B, C_q1 for a lambda");
  coeffs->add_option("--lambda", lambda, "Rule parameter in [0,1]")->required();
  coeffs->add_flag("--json", as_json, "Emit a JSON object");

  // bound
  bool skip_membership = false;
  int grid_n = 64;
  double q_tol = 1e-12;
  auto* bound = app.add_subcommand("bound", "Evaluate the error bound for one (lambda, q)");
  bound->add_option("--fn", fn, "Function of x")->required();
  bound->add_option("--a", a, "Left endpoint")->required();
  bound->add_option("--b", b, "Right endpoint")->required();
  bound->add_option("--lambda", lambda, "Rule parameter in [0,1]")->required();
  bound->add_option("--q", q, "Exponent q >= 1")->required();
  bound->add_flag("--skip-membership", skip_membership, "Do not scan |f''|^q for membership");
  bound->add_option("--grid", grid_n, "Membership grid size")->capture_default_str();
  bound->add_option("--qtol", q_tol, "Membership tolerance")->capture_default_str();

  // sweep
  std::string grid_text, out_path, format = "csv";
  std::vector<double> q_list;
  auto* sweep = app.add_subcommand("sweep", "Tabulate bound reports over a lambda grid and q list");
  sweep->add_option("--fn", fn, "Function of x")->required();
  sweep->add_option("--a", a, "Left endpoint")->required();
  sweep->add_option("--b", b, "Right endpoint")->required();
  sweep->add_option("--lambda-grid", grid_text, "START:END:STEP")->required();
  sweep->add_option("--q", q_list, "Comma-separated q values")->required()->delimiter(',');
  sweep->add_option("--out", out_path, "Output file (default: standard output)");
  sweep->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->add_flag("--skip-membership", skip_membership, "Do not scan |f''|^q for membership");
  sweep->add_option("--grid", grid_n, "Membership grid size")->capture_default_str();

  // qclass
  std::string g_text;
  std::optional<double> q_opt;
  auto* qclass = app.add_subcommand("qclass", "Scan a function for Godunova-Levin class violations");
  auto* g_opt = qclass->add_option("--g", g_text, "Function g(x) to check directly");
  auto* fn_opt = qclass->add_option("--fn", fn, "Check |f''(x)|^q for this f");
  qclass->add_option("--q", q_opt, "Exponent for --fn");
  qclass->add_option("--a", a, "Left endpoint")->required();
  qclass->add_option("--b", b, "Right endpoint")->required();
  qclass->add_option("--grid", grid_n, "Grid size")->capture_default_str();
  qclass->add_option("--tol", q_tol, "Violation tolerance")->capture_default_str();
  g_opt->excludes(fn_opt);

  auto* corpus = app.add_subcommand("corpus", "Print the built-in function catalogue as JSON");

  std::vector<const char*> argv;
  argv.push_back("glbound");
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*verify) {
      const auto report = verify_identity(parse(fn), Interval(a, b), RuleParams(lambda));
      const bool pass = report.abs_diff <= tol;
      out << "lhs       " << fmt6(report.lhs) << "\n"
          << "rhs       " << fmt6(report.rhs) << "\n"
          << "abs_diff  " << fmt6(report.abs_diff) << "\n"
          << "status    " << (pass ? "pass" : "fail") << "\n";
      return pass ? kOk : kPropertyFail;
    }

    if (*coeffs) {
      const CoefficientSet c = coefficient_set(lambda);
      if (as_json) {
        nlohmann::ordered_json j;
        j["M"] = c.m;
        j["A"] = c.a_coef;
        j["B"] = c.b_coef;
        j["C_q1"] = c.c_q1;
        j["regime"] = std::string(to_string(c.regime));
        out << j.dump() << "\n";
      } else {
        out << "lambda  " << fmt6(lambda) << "\n"
            << "regime  " << to_string(c.regime) << "\n"
            << "M       " << fmt6(c.m) << "\n"
            << "A       " << fmt6(c.a_coef) << "\n"
            << "B       " << fmt6(c.b_coef) << "\n"
            << "C_q1    " << fmt6(c.c_q1) << "\n";
      }
      return kOk;
    }

    if (*bound) {
      const Expr e = parse(fn);
      const Interval iv(a, b);
      const auto report =
          evaluate_bound_report(e, iv, lambda, q, QuadratureConfig{},
                                skip_membership ? MembershipMode::Skip : MembershipMode::Scan,
                                QClassOptions{grid_n, q_tol});
      out << "function    " << fn << "\n"
          << "interval    [" << fmt6(iv.a()) << ", " << fmt6(iv.b()) << "]\n"
          << "lambda      " << fmt6(report.lambda) << "\n"
          << "q           " << fmt6(report.q) << "\n"
          << "regime      " << to_string(report.regime) << "\n"
          << "|f''(a)|    " << fmt6(report.g_a) << "\n"
          << "|f''(b)|    " << fmt6(report.g_b) << "\n"
          << "lhs_abs     " << fmt6(report.lhs_abs) << "\n"
          << "bound       " << fmt6(report.bound) << "\n"
          << "ratio       " << (report.ratio ? fmt6(*report.ratio) : "undefined") << "\n"
          << "membership  " << to_string(report.q_membership) << "\n";
      if (report.q_membership == MembershipStatus::CheckedFail) {
        out << "bound not asserted: |f''|^q failed the membership scan\n";
        return kMembershipFail;
      }
      return report.within_bound() ? kOk : kPropertyFail;
    }

    if (*sweep) {
      const Expr e = parse(fn);
      const Interval iv(a, b);
      const LambdaGrid grid = parse_lambda_grid(grid_text);
      for (double qv : q_list) BoundInput{iv, 0.0, qv, 0.0, 0.0}.validate();
      std::vector<double> qs = q_list;
      std::sort(qs.begin(), qs.end());

      // Membership does not depend on lambda.
      std::vector<MembershipStatus> status;
      for (double qv : qs) {
        if (skip_membership) {
          status.push_back(MembershipStatus::Unchecked);
        } else {
          const auto scan = membership_for_bound(e, iv, qv, QClassOptions{grid_n, 1e-12});
          status.push_back(scan.passed ? MembershipStatus::CheckedPass
                                       : MembershipStatus::CheckedFail);
        }
      }

      std::vector<BoundReport> rows;
      for (double lv : grid.values()) {
        for (std::size_t k = 0; k < qs.size(); ++k) {
          rows.push_back(bound_report_with_status(e, iv, lv, qs[k], QuadratureConfig{}, status[k]));
        }
      }

      std::string data;
      if (format == "csv") {
        data = csv_header() + "\n";
        for (const auto& r : rows) data += csv_row(r) + "\n";
      } else {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) arr.push_back(json_row(r));
        data = arr.dump(2) + "\n";
      }

      if (out_path.empty()) {
        out << data;
      } else {
        std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
        if (!file || !(file << data) || !file.flush()) {
          throw Error(ErrorKind::Io, "cannot write '" + out_path + "'");
        }
      }
      err << "glbound sweep: " << rows.size() << " rows ("
          << (out_path.empty() ? std::string("stdout") : out_path) << ")\n";
      return kOk;
    }

    if (*qclass) {
      const bool direct = g_opt->count() > 0;
      if (direct == (fn_opt->count() > 0)) {
        throw Error(ErrorKind::InvalidArgument, "give exactly one of --g or --fn");
      }
      if (direct && q_opt) throw Error(ErrorKind::InvalidArgument, "--q only applies to --fn");
      if (!direct && !q_opt) throw Error(ErrorKind::InvalidArgument, "--fn requires --q");
      const Interval iv(a, b);
      const QClassOptions opts{grid_n, q_tol};
      QClassReport report;
      if (direct) {
        const Expr g = parse(g_text);
        out << "function    g(x) = " << g_text << "\n";
        report = check_godunova_levin([&g](double x) { return eval(g, x); }, iv, opts);
      } else {
        out << "function    |f''(x)|^" << fmt6(*q_opt) << " for f(x) = " << fn << "\n";
        report = membership_for_bound(parse(fn), iv, *q_opt, opts);
      }
      print_qclass_report(out, report);
      return report.passed ? kOk : kPropertyFail;
    }

    if (*corpus) {
      out << corpus_json().dump(2) << "\n";
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Io ? kIoError : kInputError;
  }
  return kInputError;
}

}  // namespace glbound::cli
