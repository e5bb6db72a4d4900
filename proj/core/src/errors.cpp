#include "siamreid/errors.hpp"

namespace siamreid {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kEmptyDictionary: return "EmptyDictionary";
    case ErrorCode::kMissingFeature: return "MissingFeature";
    case ErrorCode::kInitFailed: return "InitFailed";
    case ErrorCode::kStepFailed: return "StepFailed";
    case ErrorCode::kWrongPayload: return "WrongPayload";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kRegionSmallerThanTemplate: return "RegionSmallerThanTemplate";
    case ErrorCode::kPatchTooSmall: return "PatchTooSmall";
    case ErrorCode::kInfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNoAnnotatedFrames: return "NoAnnotatedFrames";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace siamreid
