#include "xfer/error.hpp"

namespace xfer {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::RaggedRow: return "RaggedRow";
    case ErrorCode::UnknownDomain: return "UnknownDomain";
    case ErrorCode::NonNumeric: return "NonNumeric";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::EmptyPart: return "EmptyPart";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::SingleDomain: return "SingleDomain";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::MissingCheckpoint: return "MissingCheckpoint";
    case ErrorCode::MalformedTrace: return "MalformedTrace";
    case ErrorCode::DegenerateIntra: return "DegenerateIntra";
    case ErrorCode::DegenerateInter: return "DegenerateInter";
    case ErrorCode::ZeroChannel: return "ZeroChannel";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NanLoss: return "NanLoss";
    case ErrorCode::TooFewCheckpoints: return "TooFewCheckpoints";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::OutOfRange:
    case ErrorCode::DimensionMismatch:
      return ErrorCategory::Usage;
    case ErrorCode::DegenerateIntra:
    case ErrorCode::DegenerateInter:
    case ErrorCode::ZeroChannel:
    case ErrorCode::ZeroNorm:
    case ErrorCode::NonFinite:
    case ErrorCode::NanLoss:
    case ErrorCode::TooFewCheckpoints:
    case ErrorCode::ProbabilityOutOfRange:
      return ErrorCategory::Numeric;
    default:
      return ErrorCategory::Data;
  }
}

}  // namespace xfer
