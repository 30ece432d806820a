#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "timepuzzles/date.hpp"

namespace timepuzzles {

enum class Zodiac : int {
  Rat = 0,
  Ox,
  Tiger,
  Rabbit,
  Dragon,
  Snake,
  Horse,
  Goat,
  Monkey,
  Rooster,
  Dog,
  Pig,
};

const char* to_string(Zodiac z);
std::optional<Zodiac> zodiac_from_string(std::string_view name);

// Animal of a lunar year. 1900 was a Rat year and the cycle is fixed, so
// this needs no table.
Zodiac zodiac_of_lunar_year(int lunar_year);

struct LunarDate {
  int lunar_year = 0;
  int lunar_month = 0;  // 1..12; a leap month repeats its predecessor's number
  bool is_leap_month = false;
  int lunar_day = 0;  // 1..29 or 1..30

  bool operator==(const LunarDate&) const = default;
};

// Chinese lunisolar calendar backed by a per-year table: Gregorian new year
// date, leap month index (0 = none), and the 12 or 13 month lengths.
class LunarTable {
 public:
  struct YearRecord {
    int lunar_year;
    int32_t new_year;  // serial of lunar month 1 day 1
    int leap_month;    // 0 if none
    std::vector<int> month_lengths;
  };

  static LunarTable parse(std::string_view text);
  static LunarTable load(const std::string& path);
  static const LunarTable& builtin();

  // Days covered: first new year .. last day of the last tabulated year.
  int32_t coverage_first() const { return records_.front().new_year; }
  int32_t coverage_last() const { return coverage_last_; }
  int first_lunar_year() const { return records_.front().lunar_year; }
  int last_lunar_year() const { return records_.back().lunar_year; }
  const std::vector<YearRecord>& records() const { return records_; }
  const YearRecord& record(int lunar_year) const;  // throws coverage_error

  // nullopt outside coverage.
  std::optional<LunarDate> to_lunar(int32_t serial) const;
  std::optional<LunarDate> to_lunar(const Date& d) const;
  // Throws coverage_error outside coverage, validation_error on impossible
  // lunar dates (bad month, day past month end, leap flag on a non-leap month).
  Date from_lunar(const LunarDate& ld) const;

  std::optional<Zodiac> zodiac_of(int32_t serial) const;
  std::optional<Zodiac> zodiac_of(const Date& d) const;

 private:
  std::vector<YearRecord> records_;
  int32_t coverage_last_ = 0;
};

}  // namespace timepuzzles
