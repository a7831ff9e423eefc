#pragma once

#include <stdexcept>
#include <string>

namespace fbt {

enum class ErrorCode {
  kInvalidArgument = 1,
  kInvalidAnchors,
  kOutOfBounds,
  kParseError,
  kInvariantViolation,
  kSessionTerminated,
  kModeMismatch,
  kNonMonotoneTimestamp,
  kUnmappableDigit,
  kNonPositiveDuration,
  kEmptyTranscription,
  kTooFewValues,
  kSampleSizeOutOfRange,
  kZeroVariance,
  kTooFewGroups,
  kZeroWithinVariance,
  kEmptySample,
  kInsufficientData,
  kIo,
  kConfig,
  kNetwork,
};

const char* errorCodeName(ErrorCode code);

// Every failure raised by the core carries one of the codes above; the C API
// maps them one-to-one onto fbt_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fbt
