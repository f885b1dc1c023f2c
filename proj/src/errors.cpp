#include "nhlab/errors.hpp"

namespace nhlab {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::DuplicatePotential: return "DuplicatePotential";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::SameJoint: return "SameJoint";
    case ErrorCode::BandEdge: return "BandEdge";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::VanishingJointAmplitude: return "VanishingJointAmplitude";
    case ErrorCode::ZeroInteriorState: return "ZeroInteriorState";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidMode: return "InvalidMode";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidN: return "InvalidN";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

bool is_numeric_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::BandEdge:
    case ErrorCode::SingularSystem:
    case ErrorCode::VanishingJointAmplitude:
    case ErrorCode::ZeroInteriorState:
    case ErrorCode::NoConvergence:
    case ErrorCode::SingularDenominator:
      return true;
    default:
      return false;
  }
}

}  // namespace nhlab
