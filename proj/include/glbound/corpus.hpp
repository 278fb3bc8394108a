#pragma once

// Built-in test functions shared by the test suites and the CLI.

#include <string>
#include <string_view>
#include <vector>

#include "glbound/expr.hpp"
#include "glbound/numeric_core.hpp"

namespace glbound {

enum class CorpusMembership {
  Certified,   // |f''|^q is constant or nonnegative convex for every q >= 1
  ExpectPass,  // expected to pass the grid scan
  ExpectFail,  // the grid scan finds a counterexample at q = 1
};

constexpr std::string_view to_string(CorpusMembership m) noexcept {
  switch (m) {
    case CorpusMembership::Certified: return "Certified";
    case CorpusMembership::ExpectPass: return "Expect-Pass";
    case CorpusMembership::ExpectFail: return "Expect-Fail";
  }
  return "?";
}

struct CorpusEntry {
  std::string name;
  std::string expression;
  Interval interval;
  CorpusMembership membership;
  std::string note;

  Expr parsed() const { return parse(expression); }
};

inline const std::vector<CorpusEntry>& corpus_entries() {
  static const std::vector<CorpusEntry> entries = {
      {"quadratic", "x^2", Interval(0.0, 1.0), CorpusMembership::Certified,
       "f'' = 2 is constant"},
      {"quartic", "x^4", Interval(0.0, 1.0), CorpusMembership::Certified,
       "f'' = 12x^2 is nonnegative and convex"},
      {"exponential", "exp(x)", Interval(0.0, 1.0), CorpusMembership::Certified,
       "f'' = exp(x); exp(qx) is nonnegative and convex"},
      {"cosh", "(exp(x)+exp(-x))/2", Interval(-1.0, 1.0), CorpusMembership::Certified,
       "f'' = cosh(x), symmetric about 0"},
      {"reciprocal", "1/(x+2)", Interval(0.0, 1.0), CorpusMembership::ExpectPass,
       "f'' = 2/(x+2)^3 is positive and decreasing"},
      {"sine", "sin(x)", Interval(0.000001, 3.141592), CorpusMembership::ExpectFail,
       "|f''| = sin(x) is concave; fails near x=0, y=pi, lambda=1/2"},
  };
  return entries;
}

/// Looks up an entry by name or by expression text; nullptr when absent.
inline const CorpusEntry* find_corpus_entry(std::string_view key) {
  for (const auto& entry : corpus_entries()) {
    if (entry.name == key || entry.expression == key) return &entry;
  }
  return nullptr;
}

}  // namespace glbound
