#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcmeter {

enum class ErrorCode {
  kInvalidValue,
  kKindMismatch,
  kUnknownLevel,
  kEmptyScale,
  kParseError,
  kRangeError,
  kUnboundReference,
  kNullMetric,
  kNoApplicableDimension,
  kEmptyTrace,
  kEmptyLog,
  kIoError,
  kMalformedDocument,
  kSpecInvalid,
  kDuplicateTraceId,
  kUnknownTraceId,
};

// Machine-readable name, e.g. "KIND_MISMATCH".
std::string_view to_string(ErrorCode code);

// Every domain failure in the library is reported through this type. The
// message never repeats the code; what() is "<CODE>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace pcmeter
