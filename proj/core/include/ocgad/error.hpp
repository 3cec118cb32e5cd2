#pragma once

#include <stdexcept>
#include <string>

namespace ocgad {

enum class Errc {
  kMalformedDocument,
  kMissingField,
  kDanglingObjectRef,
  kInconsistentAttributeKind,
  kEmptyObjectRefs,
  kDuplicateEventId,
  kInvalidTimestamp,
  kIndexOutOfRange,
  kSelfLoop,
  kUnknownCategoricalValue,
  kDimensionMismatch,
  kInvalidArgument,
  kNonFiniteLoss,
  kEmptyInput,
  kLengthMismatch,
  kSingleClass,
  kNoPositives,
  kInvalidRate,
  kNoAttributes,
  kDegenerateSpan,
  kInsufficientCandidates,
  kChecksumMismatch,
  kJoinMismatch,
  kIo,
};

const char* to_string(Errc code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ocgad
