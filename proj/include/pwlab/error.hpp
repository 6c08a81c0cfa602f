#pragma once

#include <stdexcept>
#include <string>

namespace pwlab {

/// Failure categories surfaced by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
  invalid_input,
  invalid_grid,
  quadrature_failure,
  pv_divergence,
  overflow,
  positivity_failure,
  io_error,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_grid: return "invalid-grid";
    case ErrorKind::quadrature_failure: return "quadrature-failure";
    case ErrorKind::pv_divergence: return "pv-divergence";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::positivity_failure: return "positivity-failure";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for errors caused by the caller (bad arguments, bad files) rather than numerics.
  bool is_usage_error() const noexcept {
    return kind_ == ErrorKind::invalid_input || kind_ == ErrorKind::invalid_grid ||
           kind_ == ErrorKind::io_error;
  }

 private:
  ErrorKind kind_;
};

}  // namespace pwlab
