#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ocgad {

// Milliseconds since 1970-01-01T00:00:00Z.
struct Timestamp {
  std::int64_t millis_since_epoch = 0;

  auto operator<=>(const Timestamp&) const = default;

  // Accepts `YYYY-MM-DD`, optionally followed by `T` or a space and
  // `HH:MM[:SS[.fff...]]`, optionally followed by `Z` or `+HH:MM` / `-HHMM`.
  // Values without a zone designator are taken as UTC.
  static Timestamp parse_iso8601(std::string_view text);

  // Always `YYYY-MM-DDTHH:MM:SS.mmmZ`.
  std::string to_iso8601() const;
};

}  // namespace ocgad
