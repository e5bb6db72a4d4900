#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace siamreid {

enum class ErrorCode {
  kNoOverlap,
  kDecodeError,
  kDimensionMismatch,
  kZeroVector,
  kEmptyDictionary,
  kMissingFeature,
  kInitFailed,
  kStepFailed,
  kWrongPayload,
  kMalformedRecord,
  kRegionSmallerThanTemplate,
  kPatchTooSmall,
  kInfeasibleConfig,
  kIndexOutOfRange,
  kNoAnnotatedFrames,
  kEmptyInput,
  kInvalidArgument,
  kConfigError,
  kIoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the engine. The code is the
/// machine-readable part; what() carries the human diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A line of an interchange or annotation file could not be parsed.
class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string& message)
      : Error(ErrorCode::kMalformedRecord,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Tracker step failure; the caller's state is untouched.
class StepFailed : public Error {
 public:
  StepFailed(long frame_index, const std::string& message)
      : Error(ErrorCode::kStepFailed,
              "frame " + std::to_string(frame_index) + ": " + message),
        frame_index_(frame_index) {}

  long frame_index() const noexcept { return frame_index_; }

 private:
  long frame_index_;
};

}  // namespace siamreid
