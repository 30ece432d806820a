#include "timepuzzles/date.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <stdexcept>

#include "timepuzzles/errors.hpp"

namespace timepuzzles {

int32_t to_serial(const Date& d) {
  std::chrono::year_month_day ymd{std::chrono::year{d.year},
                                  std::chrono::month{static_cast<unsigned>(d.month)},
                                  std::chrono::day{static_cast<unsigned>(d.day)}};
  return static_cast<int32_t>(
      std::chrono::sys_days{ymd}.time_since_epoch().count());
}

Date from_serial(int32_t serial) {
  std::chrono::year_month_day ymd{
      std::chrono::sys_days{std::chrono::days{serial}}};
  return Date{static_cast<int>(ymd.year()),
              static_cast<int>(static_cast<unsigned>(ymd.month())),
              static_cast<int>(static_cast<unsigned>(ymd.day()))};
}

bool is_leap_year(int year) {
  return year % 4 == 0 && (year % 100 != 0 || year % 400 == 0);
}

int days_in_month(int year, int month) {
  static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) throw std::invalid_argument("month out of range");
  if (month == 2 && is_leap_year(year)) return 29;
  return lengths[month - 1];
}

bool is_valid_date(const Date& d) {
  if (d.month < 1 || d.month > 12) return false;
  if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return false;
  return true;
}

Weekday weekday_of_serial(int32_t serial) {
  // Serial 0 = 1970-01-01, a Thursday.
  int w = static_cast<int>(((static_cast<int64_t>(serial) + 3) % 7 + 7) % 7);
  return static_cast<Weekday>(w);
}

Weekday weekday_of(const Date& d) { return weekday_of_serial(to_serial(d)); }

NthWeekday nth_weekday_occurrence(const Date& d) {
  return NthWeekday{(d.day + 6) / 7, weekday_of(d)};
}

Season season_of(int month) {
  switch (month) {
    case 12:
    case 1:
    case 2:
      return Season::Winter;
    case 3:
    case 4:
    case 5:
      return Season::Spring;
    case 6:
    case 7:
    case 8:
      return Season::Summer;
    case 9:
    case 10:
    case 11:
      return Season::Autumn;
    default:
      throw std::invalid_argument("month out of range: " + std::to_string(month));
  }
}

std::string to_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

std::optional<Date> try_parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = 0; i < len; ++i) v = v * 10 + (text[pos + i] - '0');
    return v;
  };
  Date d{num(0, 4), num(5, 2), num(8, 2)};
  if (!is_valid_date(d)) return std::nullopt;
  return d;
}

Date parse_date(std::string_view text) {
  auto d = try_parse_date(text);
  if (!d) throw validation_error("not a valid YYYY-MM-DD date: '" + std::string(text) + "'");
  return *d;
}

const char* to_string(Weekday w) {
  static constexpr const char* names[] = {"Monday",   "Tuesday", "Wednesday",
                                          "Thursday", "Friday",  "Saturday",
                                          "Sunday"};
  return names[static_cast<int>(w)];
}

const char* to_string(Season s) {
  static constexpr const char* names[] = {"Winter", "Spring", "Summer", "Autumn"};
  return names[static_cast<int>(s)];
}

const char* month_name(int month) {
  static constexpr const char* names[] = {
      "January", "February", "March",     "April",   "May",      "June",
      "July",    "August",   "September", "October", "November", "December"};
  if (month < 1 || month > 12) throw std::invalid_argument("month out of range");
  return names[month - 1];
}

std::optional<Weekday> weekday_from_string(std::string_view name) {
  for (int i = 0; i < 7; ++i) {
    if (name == to_string(static_cast<Weekday>(i))) return static_cast<Weekday>(i);
  }
  return std::nullopt;
}

std::optional<Season> season_from_string(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (name == to_string(static_cast<Season>(i))) return static_cast<Season>(i);
  }
  return std::nullopt;
}

DateUniverse::DateUniverse(const Date& start, const Date& end)
    : start_(start), end_(end) {
  if (!is_valid_date(start)) throw validation_error("universe start is not a valid date");
  if (!is_valid_date(end)) throw validation_error("universe end is not a valid date");
  first_ = to_serial(start);
  last_ = to_serial(end);
  if (first_ > last_) throw validation_error("universe start is after its end");
}

bool DateUniverse::contains(const Date& d) const {
  return is_valid_date(d) && contains(to_serial(d));
}

const DateUniverse& default_universe() {
  static const DateUniverse u{Date{1900, 1, 1}, Date{2030, 12, 31}};
  return u;
}

}  // namespace timepuzzles
