#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smoothlab {

enum class ErrorKind {
  invalid_argument,
  not_invertible,
  budget_exceeded,
  sieve_range,
  no_sign_change,
  divergence,
  aliasing,
  empty_minor_grid,
  length_mismatch,
  majorization,
  empty_candidates,
  no_progression,
  io,
  format,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::not_invertible: return "not_invertible";
    case ErrorKind::budget_exceeded: return "budget_exceeded";
    case ErrorKind::sieve_range: return "sieve_range";
    case ErrorKind::no_sign_change: return "no_sign_change";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::empty_minor_grid: return "empty_minor_grid";
    case ErrorKind::length_mismatch: return "length_mismatch";
    case ErrorKind::majorization: return "majorization";
    case ErrorKind::empty_candidates: return "empty_candidates";
    case ErrorKind::no_progression: return "no_progression";
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
  }
  return "unknown";
}

/// Every module failure surfaces as this exception; `kind()` is the
/// machine-readable tag the CLI writes into its error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace smoothlab
