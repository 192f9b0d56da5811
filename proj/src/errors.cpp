#include "liedetect/errors.hpp"

namespace liedetect {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::NotSkewSymmetric: return "NotSkewSymmetric";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyAmbient: return "EmptyAmbient";
    case ErrorCode::NoAlmostFaithfulRep: return "NoAlmostFaithfulRep";
    case ErrorCode::NoRealIrrep: return "NoRealIrrep";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::IsolatedPoint: return "IsolatedPoint";
    case ErrorCode::TangentEstimationFailed: return "TangentEstimationFailed";
    case ErrorCode::ZeroPointInCloud: return "ZeroPointInCloud";
    case ErrorCode::DegenerateEigenframe: return "DegenerateEigenframe";
    case ErrorCode::OptimizerDiverged: return "OptimizerDiverged";
    case ErrorCode::NonReducibleFrame: return "NonReducibleFrame";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::DegenerateBasePoint: return "DegenerateBasePoint";
    case ErrorCode::SamplerStalled: return "SamplerStalled";
    case ErrorCode::RawCloud: return "RawCloud";
    case ErrorCode::Configuration: return "ConfigurationError";
    case ErrorCode::Io: return "IoError";
  }
  return "UnknownError";
}

bool is_configuration_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Configuration:
    case ErrorCode::Io:
    case ErrorCode::EmptyAmbient:
    case ErrorCode::NoAlmostFaithfulRep:
    case ErrorCode::NoRealIrrep:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NoCandidates:
    case ErrorCode::RawCloud:
      return true;
    default:
      return false;
  }
}

}  // namespace liedetect
