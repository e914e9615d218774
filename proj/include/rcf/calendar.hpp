#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace rcf {

/// A calendar month, e.g. 2015-07.
struct YearMonth {
  int year = 1970;
  int month = 1;  // 1..12

  auto operator<=>(const YearMonth&) const = default;

  /// Months since year 0; handy for ranges and differences.
  [[nodiscard]] int index() const { return year * 12 + (month - 1); }
  [[nodiscard]] static YearMonth from_index(int idx);

  [[nodiscard]] YearMonth next() const { return from_index(index() + 1); }
  [[nodiscard]] std::string to_string() const;

  /// Parses "YYYY-MM". Throws std::invalid_argument on anything else.
  static YearMonth parse(std::string_view text);
};

struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  [[nodiscard]] YearMonth year_month() const { return {year, month}; }
  [[nodiscard]] std::string to_string() const;

  /// Parses "YYYY-MM-DD" and checks the day against the Gregorian calendar.
  static Date parse(std::string_view text);
};

/// Inclusive range of months.
struct MonthRange {
  YearMonth first;
  YearMonth last;

  auto operator<=>(const MonthRange&) const = default;

  [[nodiscard]] bool contains(YearMonth m) const { return first <= m && m <= last; }
  [[nodiscard]] bool contains(const MonthRange& other) const {
    return first <= other.first && other.last <= last;
  }
  [[nodiscard]] bool valid() const { return first <= last; }
  [[nodiscard]] int size() const { return valid() ? last.index() - first.index() + 1 : 0; }
  [[nodiscard]] std::string to_string() const;

  /// Parses "YYYY-MM..YYYY-MM".
  static MonthRange parse(std::string_view text);
};

bool is_leap_year(int year);
int days_in_month(YearMonth m);

/// Nominal generating hours of a month: days x 24. Daylight-saving shifts are
/// ignored.
int hours_in_month(YearMonth m);

}  // namespace rcf
