#pragma once

#include <stdexcept>
#include <string>

namespace wh {

enum class ErrorCode {
  DegenerateCoefficient,
  SingularSystem,
  ZeroTau,
  DegeneratePair,
  InadmissiblePartition,
  OutOfChart,
  ExtremalOrOverRotating,
  ParameterViolation,
  SchemaError,
  InvariantViolation,
  NonSquareSystem,
  UnsupportedPoleSet,
  NotCanonical,
  NonPhysicalM,
  NoRealSolution,
  NoCurveFound,
  DegenerateZeros,
  UnsupportedLambda,
  Usage,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace wh
