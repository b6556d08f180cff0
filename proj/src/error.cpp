#include "pcmeter/error.hpp"

namespace pcmeter {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidValue: return "INVALID_VALUE";
    case ErrorCode::kKindMismatch: return "KIND_MISMATCH";
    case ErrorCode::kUnknownLevel: return "UNKNOWN_LEVEL";
    case ErrorCode::kEmptyScale: return "EMPTY_SCALE";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kRangeError: return "RANGE_ERROR";
    case ErrorCode::kUnboundReference: return "UNBOUND_REFERENCE";
    case ErrorCode::kNullMetric: return "NULL_METRIC";
    case ErrorCode::kNoApplicableDimension: return "NO_APPLICABLE_DIMENSION";
    case ErrorCode::kEmptyTrace: return "EMPTY_TRACE";
    case ErrorCode::kEmptyLog: return "EMPTY_LOG";
    case ErrorCode::kIoError: return "IO_ERROR";
    case ErrorCode::kMalformedDocument: return "MALFORMED_DOCUMENT";
    case ErrorCode::kSpecInvalid: return "SPEC_INVALID";
    case ErrorCode::kDuplicateTraceId: return "DUPLICATE_TRACE_ID";
    case ErrorCode::kUnknownTraceId: return "UNKNOWN_TRACE_ID";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, std::string message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      message_(std::move(message)) {}

}  // namespace pcmeter
