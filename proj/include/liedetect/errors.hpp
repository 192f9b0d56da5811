#pragma once

#include <stdexcept>
#include <string>

namespace liedetect {

enum class ErrorCode {
  InvalidMatrix,
  NotSkewSymmetric,
  NotPSD,
  DimensionMismatch,
  EmptyAmbient,
  NoAlmostFaithfulRep,
  NoRealIrrep,
  RankDeficient,
  DegenerateCloud,
  IsolatedPoint,
  TangentEstimationFailed,
  ZeroPointInCloud,
  DegenerateEigenframe,
  OptimizerDiverged,
  NonReducibleFrame,
  NoCandidates,
  EmptySample,
  EmptySet,
  BadWeights,
  DegenerateBasePoint,
  SamplerStalled,
  RawCloud,
  Configuration,
  Io,
};

const char* error_name(ErrorCode code);

// Errors caused by the caller's settings rather than by the numbers.
bool is_configuration_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace liedetect
