#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kreinfield {

enum class ErrorCode {
  NonHermitian,
  AuxNotPositive,
  SingularEta,
  DegreeOverflow,
  NotPositiveSemidefinite,
  NotHermitian,
  DimensionOverflow,
  ModeMismatch,
  EmptySubspace,
  GridMismatch,
  StepTooLarge,
  LandauGauge,
  NotSpacelike,
  ConfigInvalid,
  ReportWriteFailed,
  ShapeMismatch,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code identifies the failure
/// class so callers and tests can branch on it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kreinfield
