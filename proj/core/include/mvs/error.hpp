#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mvs {

enum class ErrorCode {
  kZeroVector,
  kDimensionMismatch,
  kEmptyViewSet,
  kEmptyMatrix,
  kEmptyDatabase,
  kDanglingReference,
  kDuplicateObjectId,
  kInvalidQuery,
  kUnknownStrategy,
  kFormatError,
  kOutOfRange,
  kEmptyList,
  kLengthMismatch,
  kMissingGroundTruth,
  kInvalidConfig,
  kIoError,
};

/// Stable snake_case name, used as the machine-readable code in service
/// responses.
std::string_view error_code_name(ErrorCode code);

/// The single exception type thrown by the library. Format errors carry the
/// byte offset at which decoding failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, std::uint64_t byte_offset);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::uint64_t> byte_offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::uint64_t> offset_;
};

}  // namespace mvs
