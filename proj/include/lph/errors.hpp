#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lph {

// Broad failure categories. The CLI maps these onto exit codes, so keep the
// set small and stable.
enum class ErrorKind {
  invalid_argument,     // bad parameter value (eps <= 0, p < 1, t outside [0,1], ...)
  dimension_mismatch,   // payload length / domain / space disagreement
  invalid_point,        // payload violates the space's invariants
  capability_absent,    // space lacks geodesic / enumerator / epsilon-net support
  geometry_absent,      // grid geometry required but the domain has none
  membership_violated,  // map is not at finite D_p distance from the base mapping
  budget_exceeded,      // search hit a hard iteration cap
  non_convergence,      // Cauchy iteration did not produce a limit in the target
  infeasible,           // construction impossible at the current resolution
  parse_error,          // malformed file or configuration
  io_error,             // unreadable / unwritable path
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::invalid_point: return "invalid_point";
    case ErrorKind::capability_absent: return "capability_absent";
    case ErrorKind::geometry_absent: return "geometry_absent";
    case ErrorKind::membership_violated: return "membership_violated";
    case ErrorKind::budget_exceeded: return "budget_exceeded";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::parse_error: return "parse_error";
    case ErrorKind::io_error: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace lph
