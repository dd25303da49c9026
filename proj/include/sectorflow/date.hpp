#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "sectorflow/error.hpp"

namespace sectorflow {

/// Calendar date with day resolution. Only ISO-8601 `YYYY-MM-DD` is
/// accepted on input.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  constexpr Date(int y, unsigned m, unsigned d)
      : days_(std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}) {}

  static Date parse(std::string_view text) {
    auto fail = [&] {
      return Error(ErrorCode::kMalformedInput,
                   "invalid ISO-8601 date '" + std::string(text) + "'");
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw fail();
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    auto field = [&](std::size_t pos, std::size_t len, auto& out) {
      const char* first = text.data() + pos;
      const char* last = first + len;
      auto [ptr, ec] = std::from_chars(first, last, out);
      if (ec != std::errc{} || ptr != last) throw fail();
    };
    field(0, 4, y);
    field(5, 2, m);
    field(8, 2, d);
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok()) throw fail();
    return Date(std::chrono::sys_days{ymd});
  }

  std::chrono::sys_days days() const { return days_; }
  std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }
  int year() const { return static_cast<int>(ymd().year()); }

  /// 0 = Sunday ... 6 = Saturday.
  unsigned weekday() const { return std::chrono::weekday{days_}.c_encoding(); }

  Date next_day() const { return Date(days_ + std::chrono::days{1}); }

  std::string iso() const {
    auto v = ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(v.year()),
                  static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()));
    return buf;
  }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;
  friend constexpr bool operator==(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

/// Closed date interval [first, last].
struct DateRange {
  Date first;
  Date last;

  bool contains(const Date& d) const { return first <= d && d <= last; }
  bool empty() const { return last < first; }

  static DateRange calendar_year(int year) {
    return {Date(year, 1, 1), Date(year, 12, 31)};
  }
};

}  // namespace sectorflow
