#include "rcf/calendar.hpp"

#include <charconv>
#include <stdexcept>

#include <fmt/core.h>

namespace rcf {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t count, std::string_view whole) {
  int value = 0;
  const char* begin = text.data() + pos;
  const char* end = begin + count;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument(fmt::format("invalid date field in '{}'", whole));
  }
  for (const char* c = begin; c != end; ++c) {
    if (*c < '0' || *c > '9') throw std::invalid_argument(fmt::format("invalid date field in '{}'", whole));
  }
  return value;
}

}  // namespace

YearMonth YearMonth::from_index(int idx) {
  // floor division so that negative indices still map sensibly
  int year = idx >= 0 ? idx / 12 : -((-idx + 11) / 12);
  return {year, idx - year * 12 + 1};
}

std::string YearMonth::to_string() const { return fmt::format("{:04d}-{:02d}", year, month); }

YearMonth YearMonth::parse(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') {
    throw std::invalid_argument(fmt::format("expected YYYY-MM, got '{}'", text));
  }
  YearMonth ym{parse_digits(text, 0, 4, text), parse_digits(text, 5, 2, text)};
  if (ym.month < 1 || ym.month > 12) {
    throw std::invalid_argument(fmt::format("month out of range in '{}'", text));
  }
  return ym;
}

std::string Date::to_string() const { return fmt::format("{:04d}-{:02d}-{:02d}", year, month, day); }

Date Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw std::invalid_argument(fmt::format("expected YYYY-MM-DD, got '{}'", text));
  }
  Date d{parse_digits(text, 0, 4, text), parse_digits(text, 5, 2, text), parse_digits(text, 8, 2, text)};
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year_month())) {
    throw std::invalid_argument(fmt::format("no such calendar date '{}'", text));
  }
  return d;
}

std::string MonthRange::to_string() const { return first.to_string() + ".." + last.to_string(); }

MonthRange MonthRange::parse(std::string_view text) {
  auto sep = text.find("..");
  if (sep == std::string_view::npos) {
    throw std::invalid_argument(fmt::format("expected YYYY-MM..YYYY-MM, got '{}'", text));
  }
  MonthRange r{YearMonth::parse(text.substr(0, sep)), YearMonth::parse(text.substr(sep + 2))};
  if (!r.valid()) throw std::invalid_argument(fmt::format("range '{}' ends before it starts", text));
  return r;
}

bool is_leap_year(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int days_in_month(YearMonth m) {
  static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m.month == 2 && is_leap_year(m.year)) return 29;
  return kDays[m.month - 1];
}

int hours_in_month(YearMonth m) { return days_in_month(m) * 24; }

}  // namespace rcf
