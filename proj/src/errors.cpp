#include "wh/errors.hpp"

namespace wh {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateCoefficient: return "DegenerateCoefficient";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ZeroTau: return "ZeroTau";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::InadmissiblePartition: return "InadmissiblePartition";
    case ErrorCode::OutOfChart: return "OutOfChart";
    case ErrorCode::ExtremalOrOverRotating: return "ExtremalOrOverRotating";
    case ErrorCode::ParameterViolation: return "ParameterViolation";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::NonSquareSystem: return "NonSquareSystem";
    case ErrorCode::UnsupportedPoleSet: return "UnsupportedPoleSet";
    case ErrorCode::NotCanonical: return "NotCanonical";
    case ErrorCode::NonPhysicalM: return "NonPhysicalM";
    case ErrorCode::NoRealSolution: return "NoRealSolution";
    case ErrorCode::NoCurveFound: return "NoCurveFound";
    case ErrorCode::DegenerateZeros: return "DegenerateZeros";
    case ErrorCode::UnsupportedLambda: return "UnsupportedLambda";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace wh
