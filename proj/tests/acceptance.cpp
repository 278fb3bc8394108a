// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Tolerances are fixed here and never tuned.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "glbound/glbound.hpp"

#ifndef GLBOUND_CLI_PATH
#error "GLBOUND_CLI_PATH must point at the built CLI"
#endif

namespace {

using namespace glbound;

constexpr double kLn2 = std::numbers::ln2;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) o.detail = what;
  o.pass = o.pass && ok;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<const CorpusEntry*> bound_entries() {
  std::vector<const CorpusEntry*> out;
  for (const auto& e : corpus_entries()) {
    if (e.membership != CorpusMembership::ExpectFail) out.push_back(&e);
  }
  return out;
}

// 1. Identity on {x^2, x^4, exp, cosh, 1/(x+2)} x lambda in {0, 0.1, ..., 1}.
Outcome identity_suite() {
  Outcome o;
  int cases = 0;
  double worst = 0.0;
  for (const auto* entry : bound_entries()) {
    const Expr e = entry->parsed();
    for (int i = 0; i <= 10; ++i) {
      const auto r = verify_identity(e, entry->interval, RuleParams(i / 10.0));
      worst = std::max(worst, r.abs_diff);
      require(o, r.abs_diff <= 1e-8, entry->name + " lambda=" + num(i / 10.0));
      ++cases;
    }
  }
  require(o, cases == 55, "expected 55 cases");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(cases) +
              " cases, max |lhs-rhs| = " + num(worst);
  return o;
}

// 2. Closed-form M, A, B against quadrature of their defining integrals.
Outcome coefficient_oracle_suite() {
  Outcome o;
  const QuadratureConfig cfg{1e-13, 60};
  const Interval lo(0.0, 0.5), hi(0.5, 1.0);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double l = i / 100.0;
    const std::vector<double> br{l, 0.5, 1.0 - l};
    const auto left = [l](double t) { return std::abs(t * (t - l)); };
    const auto right = [l](double t) { return std::abs((1 - t) * (1 - l - t)); };
    // Removable 0/0 at t = 0 (left / t) and t = 1 (right / (1 - t)) take their limit l.
    const double checks[][2] = {
        {moment_M(l), integrate_piecewise(left, lo, br, cfg)},
        {moment_M(l), integrate_piecewise(right, hi, br, cfg)},
        {coeff_A(l), integrate_piecewise([&](double t) { return t == 0 ? l : left(t) / t; }, lo, br, cfg)},
        {coeff_A(l), integrate_piecewise([&](double t) { return t == 1 ? l : right(t) / (1 - t); }, hi, br, cfg)},
        {coeff_B(l), integrate_piecewise([&](double t) { return left(t) / (1 - t); }, lo, br, cfg)},
        {coeff_B(l), integrate_piecewise([&](double t) { return right(t) / t; }, hi, br, cfg)},
    };
    for (const auto& c : checks) {
      worst = std::max(worst, std::abs(c[0] - c[1]));
      require(o, std::abs(c[0] - c[1]) <= 1e-10, "lambda=" + num(l));
    }
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("101 lambdas x 6 integrals, max err = ") + num(worst);
  return o;
}

// 3. Anchor values printed for the named specialisations.
Outcome paper_anchors() {
  Outcome o;
  const std::array<std::array<double, 2>, 13> anchors{{
      {moment_M(0.0), 1.0 / 24.0},
      {moment_M(1.0 / 3.0), 1.0 / 81.0},
      {moment_M(1.0), 1.0 / 12.0},
      {coeff_A(0.0), 1.0 / 8.0},
      {coeff_B(0.0), kLn2 - 5.0 / 8.0},
      {coeff_A(1.0), 3.0 / 8.0},
      {coeff_B(1.0), 1.0 / 8.0},
      {coeff_A(1.0 / 3.0), 5.0 / 72.0},
      {coeff_B(1.0 / 3.0), 2.0 / 3.0 * std::log(8.0 / 9.0) + 7.0 / 72.0},
      {coeff_total_q1(0.0), kLn2 - 0.5},
      {2.0 * coeff_total_q1(0.0) / 4.0, 0.25 * std::log(4.0 / std::numbers::e)},
      {coeff_total_q1(1.0), 0.5},
      {coeff_total_q1(0.5), (1.0 + std::log(0.5)) / 2.0},
  }};
  double worst = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double err = std::abs(anchors[i][0] - anchors[i][1]);
    worst = std::max(worst, err);
    require(o, err <= 1e-12, "anchor #" + std::to_string(i));
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("13 anchors, max err = ") + num(worst);
  return o;
}

// 4. Low and High branch formulas agree at lambda = 1/2.
Outcome branch_continuity() {
  Outcome o;
  const double pairs[][3] = {
      {moment_M(0.5, Regime::Low), moment_M(0.5, Regime::High), 1.0 / 48.0},
      {coeff_A(0.5, Regime::Low), coeff_A(0.5, Regime::High), 1.0 / 8.0},
      {coeff_B(0.5, Regime::Low), coeff_B(0.5, Regime::High), 3.0 / 8.0 + 0.5 * std::log(0.5)},
      {coeff_total_q1(0.5, Regime::Low), coeff_total_q1(0.5, Regime::High), 0.5 - 0.5 * kLn2},
  };
  const char* names[] = {"M", "A", "B", "C"};
  for (int i = 0; i < 4; ++i) {
    require(o, std::abs(pairs[i][0] - pairs[i][1]) <= 1e-12, std::string(names[i]) + " branches");
    require(o, std::abs(pairs[i][0] - pairs[i][2]) <= 1e-12, std::string(names[i]) + " value");
  }
  return o;
}

// 5. |E| <= bound for the member corpus, 21 lambdas, q in {1, 1.5, 2, 3}.
Outcome main_inequality() {
  Outcome o;
  int cells = 0, violations = 0;
  double max_ratio = 0.0;
  for (const auto* entry : bound_entries()) {
    const Expr e = entry->parsed();
    for (double q : {1.0, 1.5, 2.0, 3.0}) {
      MembershipStatus status = MembershipStatus::Certified;
      if (entry->membership != CorpusMembership::Certified) {
        const auto scan = membership_for_bound(e, entry->interval, q);
        status = scan.passed ? MembershipStatus::CheckedPass : MembershipStatus::CheckedFail;
      }
      require(o, status != MembershipStatus::CheckedFail, entry->name + " failed membership");
      for (int i = 0; i <= 20; ++i) {
        const auto r = bound_report_with_status(e, entry->interval, i / 20.0, q, {}, status);
        ++cells;
        if (!(r.lhs_abs <= r.bound + 1e-12)) ++violations;
        if (r.ratio) max_ratio = std::max(max_ratio, *r.ratio);
      }
    }
  }
  require(o, cells >= 420, "fewer than 420 cells");
  require(o, violations == 0, std::to_string(violations) + " violations");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(cells) + " cells, " +
              std::to_string(violations) + " violations, max ratio = " + num(max_ratio);
  return o;
}

// 6. Worked numbers for x^2 on [0, 1].
Outcome worked_number() {
  Outcome o;
  const Expr e = parse("x^2");
  const Interval iv(0, 1);
  const auto r = evaluate_bound_report(e, iv, 0.0, 1.0, {}, MembershipMode::Vouched);
  require(o, std::abs(r.lhs_abs - 1.0 / 12.0) <= 1e-10, "lhs_abs");
  require(o, std::abs(r.bound - (2.0 * kLn2 - 1.0)) <= 1e-12, "bound");
  require(o, r.ratio && std::abs(*r.ratio - 0.21572495413017415) <= 1e-9, "ratio");
  const auto s = evaluate_bound_report(e, iv, 1.0 / 3.0, 1.0, {}, MembershipMode::Vouched);
  require(o, s.lhs_abs <= 1e-10, "Simpson lhs");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("lhs=") + num(r.lhs_abs) +
              " bound=" + num(r.bound) + " ratio=" + num(r.ratio.value_or(NAN));
  return o;
}

// 7. Seven specialisations against the general theorem / corollary.
Outcome specialization_coherence() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> g(0.0, 5.0);
  const Interval iv(-1.0, 2.0);
  int checks = 0;
  for (Proposition p : kAllPropositions) {
    for (double q : {1.0, 2.0, 3.0}) {
      if (proposition_requires_q1(p) && q != 1.0) continue;
      for (int t = 0; t < 20; ++t) {
        const double ga = g(rng), gb = g(rng);
        const double special = proposition_bound(p, iv, q, ga, gb);
        const double general = theorem_bound({iv, proposition_lambda(p), q, ga, gb});
        require(o, std::abs(special - general) <= 1e-12 * std::max(1.0, general),
                std::string(to_string(p)) + " vs theorem");
        if (q == 1.0) {
          const double cor = corollary_bound_q1(iv, proposition_lambda(p), ga, gb);
          require(o, std::abs(special - cor) <= 1e-12 * std::max(1.0, cor),
                  std::string(to_string(p)) + " vs corollary");
        }
        ++checks;
      }
    }
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(checks) + " comparisons";
  return o;
}

// 8. Membership checker outcomes on the corpus.
Outcome membership_checker() {
  Outcome o;
  const QClassOptions opts{64, 1e-12};
  for (const auto& entry : corpus_entries()) {
    if (entry.membership == CorpusMembership::ExpectFail) continue;
    require(o, membership_for_bound(entry.parsed(), entry.interval, 1.0, opts).passed,
            entry.name + " should pass");
  }
  const auto& sine = *find_corpus_entry("sine");
  const auto r = check_godunova_levin([](double x) { return std::sin(x); }, sine.interval, opts);
  require(o, !r.passed, "sine should fail");
  double best = -1.0;
  for (const auto& v : r.violations) {
    // Independent re-evaluation of the defining inequality.
    const double lhs = std::sin(v.lambda * v.x + (1 - v.lambda) * v.y);
    const double rhs = std::sin(v.x) / v.lambda + std::sin(v.y) / (1 - v.lambda);
    best = std::max(best, lhs - rhs);
  }
  require(o, best > 0.5, "re-evaluated margin " + num(best));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("sine: ") +
              std::to_string(r.violations.size()) + " violations, best margin = " + num(best);
  return o;
}

// 9. Jet second derivative against central differences.
Outcome derivative_engine() {
  Outcome o;
  std::mt19937_64 rng(9);
  double worst = 0.0;
  const double h = 1e-4;
  for (const auto& entry : corpus_entries()) {
    const Expr e = entry.parsed();
    const auto f = [&e](double x) { return eval(e, x); };
    std::uniform_real_distribution<double> pick(entry.interval.a() + h, entry.interval.b() - h);
    for (int i = 0; i < 100; ++i) {
      const double x = pick(rng);
      const double d2 = eval_jet2(e, x).d2;
      const double rel = std::abs(d2 - second_derivative_fd(f, x, h)) / std::max(1.0, std::abs(d2));
      worst = std::max(worst, rel);
      require(o, rel <= 1e-6, entry.name + " x=" + num(x));
    }
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("max rel err = ") + num(worst);
  return o;
}

// 10. Hermite-Hadamard on the convex corpus entries.
Outcome hermite_hadamard() {
  Outcome o;
  for (const auto& entry : corpus_entries()) {
    if (entry.membership == CorpusMembership::ExpectFail) continue;
    const auto r = hermite_hadamard_check(entry.parsed(), entry.interval);
    require(o, r.holds, entry.name);
  }
  const auto ex = hermite_hadamard_check(parse("exp(x)"), Interval(0, 1));
  require(o, std::abs(ex.lower - 1.648721) <= 1e-6, "exp lower");
  require(o, std::abs(ex.mid - 1.718281) <= 1e-6, "exp mean");
  require(o, std::abs(ex.upper - 1.859140) <= 1e-6, "exp upper");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("exp: ") + num(ex.lower) + " <= " +
              num(ex.mid) + " <= " + num(ex.upper);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 11. End-to-end sweep through the installed binary.
Outcome cli_end_to_end() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path();
  const auto first = dir / "glbound_acceptance_1.csv";
  const auto second = dir / "glbound_acceptance_2.csv";
  const std::string base = std::string("\"") + GLBOUND_CLI_PATH +
                           "\" sweep --fn \"x^2\" --a 0 --b 1 --lambda-grid 0:1:0.25 --q 1,2 --out ";
  const int rc1 = std::system((base + "\"" + first.string() + "\" 2>/dev/null").c_str());
  const int rc2 = std::system((base + "\"" + second.string() + "\" 2>/dev/null").c_str());
  require(o, rc1 == 0 && rc2 == 0, "CLI exit status");
  const std::string a = slurp(first), b = slurp(second);
  require(o, a == b, "outputs differ between runs");
  std::istringstream lines(a);
  std::string header, line;
  std::getline(lines, header);
  require(o, header == "lambda,q,regime,lhs_abs,bound,ratio,membership", "header: " + header);
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  require(o, rows == 10, std::to_string(rows) + " rows");
  std::filesystem::remove(first);
  std::filesystem::remove(second);
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(rows) + " rows, " +
              std::to_string(a.size()) + " bytes, identical across runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1  identity suite", identity_suite},
      {"AC2  coefficient oracle suite", coefficient_oracle_suite},
      {"AC3  anchor values", paper_anchors},
      {"AC4  branch continuity at 1/2", branch_continuity},
      {"AC5  main inequality", main_inequality},
      {"AC6  worked number x^2", worked_number},
      {"AC7  specialization coherence", specialization_coherence},
      {"AC8  membership checker", membership_checker},
      {"AC9  derivative engine", derivative_engine},
      {"AC10 Hermite-Hadamard", hermite_hadamard},
      {"AC11 CLI end-to-end sweep", cli_end_to_end},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS  " : "FAIL  ") << name << "  (" << o.detail << ")\n";
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed\n"
                              : std::to_string(failures) + " acceptance criteria failed\n");
  return failures == 0 ? 0 : 1;
}
