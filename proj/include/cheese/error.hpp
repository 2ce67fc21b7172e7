#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cheese {

/// Machine-readable failure categories shared by the library and the CLI.
enum class ErrorKind {
  invalid_input,
  invalid_query,
  pole_at_point,
  pole_on_support,
  grid_touches_union,
  precision_exhausted,
  infeasible_grid,
  malformed_document,
  invariant_violation,
  unsupported_version,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_input: return "InvalidInput";
    case ErrorKind::invalid_query: return "InvalidQuery";
    case ErrorKind::pole_at_point: return "PoleAtPoint";
    case ErrorKind::pole_on_support: return "PoleOnSupport";
    case ErrorKind::grid_touches_union: return "GridTouchesUnion";
    case ErrorKind::precision_exhausted: return "PrecisionExhausted";
    case ErrorKind::infeasible_grid: return "InfeasibleGrid";
    case ErrorKind::malformed_document: return "MalformedDocument";
    case ErrorKind::invariant_violation: return "InvariantViolation";
    case ErrorKind::unsupported_version: return "UnsupportedVersion";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cheese
