#include "mvs/error.hpp"

namespace mvs {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVector: return "zero_vector";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kEmptyViewSet: return "empty_view_set";
    case ErrorCode::kEmptyMatrix: return "empty_matrix";
    case ErrorCode::kEmptyDatabase: return "empty_database";
    case ErrorCode::kDanglingReference: return "dangling_reference";
    case ErrorCode::kDuplicateObjectId: return "duplicate_object_id";
    case ErrorCode::kInvalidQuery: return "invalid_query";
    case ErrorCode::kUnknownStrategy: return "unknown_strategy";
    case ErrorCode::kFormatError: return "format_error";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kEmptyList: return "empty_list";
    case ErrorCode::kLengthMismatch: return "length_mismatch";
    case ErrorCode::kMissingGroundTruth: return "missing_ground_truth";
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kIoError: return "io_error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

Error::Error(ErrorCode code, const std::string& message,
             std::uint64_t byte_offset)
    : std::runtime_error(message + " (at byte offset " +
                         std::to_string(byte_offset) + ")"),
      code_(code),
      offset_(byte_offset) {}

}  // namespace mvs
