#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nhlab {

enum class ErrorCode {
  InvalidSize,
  InvalidValue,
  IndexOutOfRange,
  DuplicateEdge,
  DuplicatePotential,
  SelfLoop,
  SameJoint,
  BandEdge,
  SingularSystem,
  VanishingJointAmplitude,
  ZeroInteriorState,
  NoConvergence,
  DimensionMismatch,
  TooLarge,
  InvalidMode,
  SingularDenominator,
  ShapeMismatch,
  InvalidN,
};

/// Stable identifier for an error code, e.g. "BandEdge".
std::string_view error_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for codes that signal a numerical failure rather than bad input.
bool is_numeric_failure(ErrorCode code);

}  // namespace nhlab
