#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bubblelab {

/// Precondition and numerical failures raised as exceptions.
enum class ErrorCode {
  NoSignChange,
  NonFinite,
  NotNonnegative,
  NoConvergence,
  Overflow,
  EmptyWindow,
  NonPositive,
  NonPositiveRate,
  LengthMismatch,
  NegativeYield,
  ZeroPrice,
  DomainError,
  IndeterminateGrowth,
  WrongRegime,
  NoBubblySteadyState,
  NoFixedPoint,
  InvalidSpec,
  Config,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A non-fatal solver outcome (NoAgreement, NoRoot, RegimeViolation, ...).
/// Solvers return these alongside whatever they managed to compute.
struct Diagnostic {
  std::string code;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_diagnostic(const Diagnostics& diags, std::string_view code) {
  for (const auto& d : diags) {
    if (d.code == code) return true;
  }
  return false;
}

}  // namespace bubblelab
