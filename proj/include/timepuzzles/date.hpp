#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace timepuzzles {

enum class Weekday : int {
  Monday = 0,
  Tuesday,
  Wednesday,
  Thursday,
  Friday,
  Saturday,
  Sunday,
};

enum class Season : int {
  Winter = 0,  // December, January, February
  Spring,      // March, April, May
  Summer,      // June, July, August
  Autumn,      // September, October, November
};

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;
};

// Serial day number: days since 1970-01-01 (can be negative).
int32_t to_serial(const Date& d);
Date from_serial(int32_t serial);

bool is_leap_year(int year);
int days_in_month(int year, int month);
bool is_valid_date(const Date& d);

Weekday weekday_of(const Date& d);
Weekday weekday_of_serial(int32_t serial);

// 2025-08-08 is the 2nd Friday of its month -> {2, Friday}.
struct NthWeekday {
  int n;
  Weekday weekday;
};
NthWeekday nth_weekday_occurrence(const Date& d);

// Meteorological seasons; throws std::invalid_argument on month outside 1..12.
Season season_of(int month);

std::string to_string(const Date& d);  // YYYY-MM-DD, zero padded
// Strict YYYY-MM-DD; throws validation_error on malformed or impossible dates.
Date parse_date(std::string_view text);
std::optional<Date> try_parse_date(std::string_view text);

const char* to_string(Weekday w);
const char* to_string(Season s);
const char* month_name(int month);
std::optional<Weekday> weekday_from_string(std::string_view name);
std::optional<Season> season_from_string(std::string_view name);

// Inclusive day range all constraint evaluation happens over.
class DateUniverse {
 public:
  // Throws validation_error if either date is invalid or start > end.
  DateUniverse(const Date& start, const Date& end);

  const Date& start() const { return start_; }
  const Date& end() const { return end_; }
  int32_t first_serial() const { return first_; }
  int32_t last_serial() const { return last_; }
  int64_t size() const { return int64_t{last_} - first_ + 1; }
  bool contains(int32_t serial) const { return serial >= first_ && serial <= last_; }
  bool contains(const Date& d) const;

  bool operator==(const DateUniverse&) const = default;

 private:
  Date start_;
  Date end_;
  int32_t first_;
  int32_t last_;
};

// 1900-01-01 through 2030-12-31.
const DateUniverse& default_universe();

}  // namespace timepuzzles
