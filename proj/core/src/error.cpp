#include "ocgad/error.hpp"

namespace ocgad {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::kMalformedDocument: return "MalformedDocument";
    case Errc::kMissingField: return "MissingField";
    case Errc::kDanglingObjectRef: return "DanglingObjectRef";
    case Errc::kInconsistentAttributeKind: return "InconsistentAttributeKind";
    case Errc::kEmptyObjectRefs: return "EmptyObjectRefs";
    case Errc::kDuplicateEventId: return "DuplicateEventId";
    case Errc::kInvalidTimestamp: return "InvalidTimestamp";
    case Errc::kIndexOutOfRange: return "IndexOutOfRange";
    case Errc::kSelfLoop: return "SelfLoop";
    case Errc::kUnknownCategoricalValue: return "UnknownCategoricalValue";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kNonFiniteLoss: return "NonFiniteLoss";
    case Errc::kEmptyInput: return "EmptyInput";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kSingleClass: return "SingleClass";
    case Errc::kNoPositives: return "NoPositives";
    case Errc::kInvalidRate: return "InvalidRate";
    case Errc::kNoAttributes: return "NoAttributes";
    case Errc::kDegenerateSpan: return "DegenerateSpan";
    case Errc::kInsufficientCandidates: return "InsufficientCandidates";
    case Errc::kChecksumMismatch: return "ChecksumMismatch";
    case Errc::kJoinMismatch: return "JoinMismatch";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace ocgad
