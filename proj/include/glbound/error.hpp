#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace glbound {

enum class ErrorKind {
  InvalidArgument,    // precondition on an input value violated
  Syntax,             // expression text does not match the grammar
  UnknownIdentifier,  // identifier is neither `x` nor a known function
  Domain,             // ln/sqrt of a negative, 0^negative, ...
  DivisionByZero,
  NonSmooth,          // derivative requested at a kink or singular point
  NonFinite,          // a function value or intermediate is inf/nan
  DepthExhausted,     // adaptive quadrature hit its recursion cap
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnknownIdentifier: return "unknown identifier";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::DivisionByZero: return "division by zero";
    case ErrorKind::NonSmooth: return "non-smooth point";
    case ErrorKind::NonFinite: return "non-finite value";
    case ErrorKind::DepthExhausted: return "quadrature depth exhausted";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

// Every failure in the library is reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failure carrying the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorKind kind, std::size_t offset, const std::string& what)
      : Error(kind, what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace glbound
