#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xfer {

enum class ErrorCode {
  // usage / configuration
  InvalidConfig,
  OutOfRange,
  DimensionMismatch,
  // data
  Io,
  BadMagic,
  Truncated,
  InvariantViolation,
  BadHeader,
  RaggedRow,
  UnknownDomain,
  NonNumeric,
  EmptyClass,
  EmptyPart,
  InsufficientSamples,
  SingleDomain,
  ClassMismatch,
  MissingCheckpoint,
  MalformedTrace,
  // numeric
  DegenerateIntra,
  DegenerateInter,
  ZeroChannel,
  ZeroNorm,
  NonFinite,
  NanLoss,
  TooFewCheckpoints,
  ProbabilityOutOfRange,
};

enum class ErrorCategory { Usage, Data, Numeric };

std::string_view error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return error_category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace xfer
