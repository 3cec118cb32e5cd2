#include "ocgad/timestamp.hpp"

#include <cctype>
#include <cstdio>

#include "ocgad/error.hpp"

namespace ocgad {
namespace {

constexpr std::int64_t kMillisPerDay = 86'400'000;

// Days since 1970-01-01 in the proleptic Gregorian calendar (H. Hinnant).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m,
                     unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30,
                                       31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  int digits(std::size_t count) {
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (done() || !std::isdigit(static_cast<unsigned char>(peek()))) {
        fail();
      }
      value = value * 10 + (text_[pos_++] - '0');
    }
    return value;
  }
  bool at_digit() const {
    return !done() && std::isdigit(static_cast<unsigned char>(peek()));
  }
  [[noreturn]] void fail() const {
    throw Error(Errc::kInvalidTimestamp,
                "cannot parse '" + std::string(text_) + "' as ISO-8601");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Timestamp Timestamp::parse_iso8601(std::string_view text) {
  Cursor cur(text);
  const int year = cur.digits(4);
  if (!cur.consume('-')) cur.fail();
  const int month = cur.digits(2);
  if (!cur.consume('-')) cur.fail();
  const int day = cur.digits(2);
  if (month < 1 || month > 12 || day < 1 ||
      static_cast<unsigned>(day) > days_in_month(year, month)) {
    cur.fail();
  }

  int hour = 0, minute = 0, second = 0;
  std::int64_t millis = 0;
  if (cur.consume('T') || cur.consume(' ')) {
    hour = cur.digits(2);
    if (!cur.consume(':')) cur.fail();
    minute = cur.digits(2);
    if (cur.consume(':')) {
      second = cur.digits(2);
      if (cur.consume('.') || cur.consume(',')) {
        if (!cur.at_digit()) cur.fail();
        // Keep millisecond precision, truncate anything finer.
        int scale = 100;
        while (cur.at_digit()) {
          const int digit = cur.digits(1);
          if (scale > 0) {
            millis += digit * scale;
            scale /= 10;
          }
        }
      }
    }
    if (hour > 23 || minute > 59 || second > 60) cur.fail();
  }

  std::int64_t offset_minutes = 0;
  if (cur.consume('Z') || cur.consume('z')) {
  } else if (cur.peek() == '+' || cur.peek() == '-') {
    const int sign = cur.peek() == '-' ? -1 : 1;
    cur.consume(cur.peek());
    const int oh = cur.digits(2);
    cur.consume(':');
    const int om = cur.at_digit() ? cur.digits(2) : 0;
    if (oh > 23 || om > 59) cur.fail();
    offset_minutes = sign * (oh * 60 + om);
  }
  if (!cur.done()) cur.fail();

  const std::int64_t days = days_from_civil(year, month, day);
  const std::int64_t local_ms =
      days * kMillisPerDay +
      ((hour * 60LL + minute) * 60LL + second) * 1000LL + millis;
  return Timestamp{local_ms - offset_minutes * 60'000LL};
}

std::string Timestamp::to_iso8601() const {
  std::int64_t days = millis_since_epoch / kMillisPerDay;
  std::int64_t rem = millis_since_epoch % kMillisPerDay;
  if (rem < 0) {
    rem += kMillisPerDay;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  const auto ms = static_cast<int>(rem % 1000);
  const auto total_s = static_cast<int>(rem / 1000);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<long long>(y), m, d, total_s / 3600,
                (total_s / 60) % 60, total_s % 60, ms);
  return buf;
}

}  // namespace ocgad
