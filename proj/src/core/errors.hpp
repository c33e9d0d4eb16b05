#pragma once

#include <stdexcept>
#include <string>

namespace radbif {

enum class ErrorCode {
  Domain,            // argument outside the mathematical domain of an operation
  Config,            // malformed or inconsistent configuration
  NonConvergence,    // iteration budget exhausted
  EstimationFailed,  // remainder-limit sampling showed no trend
  CollapsedToZero,   // Newton converged to the trivial state
  StepOff,           // could not leave the trivial branch
  Continuation,      // corrector failed at the minimum arclength
  Subsolution,       // no admissible subsolution amplitude
  Monotonicity,      // monotone iterates lost ordering
  Distinctness,      // expected two different solutions, found one
  InsufficientData,  // not enough branch points for a fit or table
  CheckFailed,       // a verification run finished but its assertion failed
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  /// True for errors caused by bad input rather than by a numerical failure.
  [[nodiscard]] bool is_usage_error() const noexcept {
    return code_ == ErrorCode::Domain || code_ == ErrorCode::Config;
  }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace radbif
