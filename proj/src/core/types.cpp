#include "types.hpp"

#include "error.hpp"

namespace fbt {

namespace {

constexpr std::array<std::string_view, kRegionCount> kRegionNames = {
    "AboveIndex", "Index",     "Middle",     "Ring",
    "Little",     "BelowLittle", "AboveThumb", "Thumb",
    "BelowThumb", "BetweenThumbAndMiddle", "BottomCentre", "ScreenCentre",
};

}  // namespace

std::string_view entryModeName(EntryMode mode) {
  return mode == EntryMode::kSingleDigit ? "single" : "double";
}

std::optional<EntryMode> parseEntryMode(std::string_view text) {
  if (text == "single") return EntryMode::kSingleDigit;
  if (text == "double") return EntryMode::kDoubleDigit;
  return std::nullopt;
}

std::string_view regionName(RegionId id) { return kRegionNames.at(regionIndex(id)); }

std::optional<RegionId> parseRegionName(std::string_view name) {
  for (int i = 0; i < kRegionCount; ++i) {
    if (kRegionNames[i] == name) return static_cast<RegionId>(i);
  }
  return std::nullopt;
}

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidAnchors: return "InvalidAnchors";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kSessionTerminated: return "SessionTerminated";
    case ErrorCode::kModeMismatch: return "ModeMismatch";
    case ErrorCode::kNonMonotoneTimestamp: return "NonMonotoneTimestamp";
    case ErrorCode::kUnmappableDigit: return "UnmappableDigit";
    case ErrorCode::kNonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::kEmptyTranscription: return "EmptyTranscription";
    case ErrorCode::kTooFewValues: return "TooFewValues";
    case ErrorCode::kSampleSizeOutOfRange: return "SampleSizeOutOfRange";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kTooFewGroups: return "TooFewGroups";
    case ErrorCode::kZeroWithinVariance: return "ZeroWithinVariance";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kNetwork: return "NetworkError";
  }
  return "Unknown";
}

}  // namespace fbt
