#include "timepuzzles/lunar.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "timepuzzles/errors.hpp"
#include "timepuzzles/lunar_table_data.hpp"

namespace timepuzzles {

const char* to_string(Zodiac z) {
  static constexpr const char* names[] = {"Rat",    "Ox",     "Tiger",
                                          "Rabbit", "Dragon", "Snake",
                                          "Horse",  "Goat",   "Monkey",
                                          "Rooster", "Dog",   "Pig"};
  return names[static_cast<int>(z)];
}

std::optional<Zodiac> zodiac_from_string(std::string_view name) {
  for (int i = 0; i < 12; ++i) {
    if (name == to_string(static_cast<Zodiac>(i))) return static_cast<Zodiac>(i);
  }
  return std::nullopt;
}

Zodiac zodiac_of_lunar_year(int lunar_year) {
  return static_cast<Zodiac>(((lunar_year - 1900) % 12 + 12) % 12);
}

LunarTable LunarTable::parse(std::string_view text) {
  LunarTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    YearRecord rec;
    std::string new_year_text, lengths_text;
    if (!(fields >> rec.lunar_year >> new_year_text >> rec.leap_month >> lengths_text)) {
      throw validation_error("lunar table line " + std::to_string(lineno) +
                             ": expected <year> <date> <leap> <lengths>");
    }
    rec.new_year = to_serial(parse_date(new_year_text));
    std::istringstream lens(lengths_text);
    std::string item;
    while (std::getline(lens, item, ',')) {
      int len = std::stoi(item);
      if (len != 29 && len != 30) {
        throw validation_error("lunar table line " + std::to_string(lineno) +
                               ": month length " + item);
      }
      rec.month_lengths.push_back(len);
    }
    int expected = rec.leap_month == 0 ? 12 : 13;
    if (rec.leap_month < 0 || rec.leap_month > 12 ||
        static_cast<int>(rec.month_lengths.size()) != expected) {
      throw validation_error("lunar table line " + std::to_string(lineno) +
                             ": month count does not match leap month field");
    }
    table.records_.push_back(std::move(rec));
  }
  if (table.records_.empty()) throw validation_error("lunar table is empty");
  for (std::size_t i = 1; i < table.records_.size(); ++i) {
    const auto& prev = table.records_[i - 1];
    const auto& cur = table.records_[i];
    if (cur.lunar_year != prev.lunar_year + 1) {
      throw validation_error("lunar table years not contiguous at " +
                             std::to_string(cur.lunar_year));
    }
    int64_t days = 0;
    for (int len : prev.month_lengths) days += len;
    if (prev.new_year + days != cur.new_year) {
      throw validation_error("lunar table discontinuity before year " +
                             std::to_string(cur.lunar_year));
    }
  }
  const auto& last = table.records_.back();
  int64_t days = 0;
  for (int len : last.month_lengths) days += len;
  table.coverage_last_ = static_cast<int32_t>(last.new_year + days - 1);
  return table;
}

LunarTable LunarTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open lunar table: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const LunarTable& LunarTable::builtin() {
  static const LunarTable table = parse(embedded::lunar_table_text);
  return table;
}

const LunarTable::YearRecord& LunarTable::record(int lunar_year) const {
  if (lunar_year < first_lunar_year() || lunar_year > last_lunar_year()) {
    throw coverage_error("lunar year " + std::to_string(lunar_year) +
                         " outside table coverage " +
                         std::to_string(first_lunar_year()) + ".." +
                         std::to_string(last_lunar_year()));
  }
  return records_[static_cast<std::size_t>(lunar_year - first_lunar_year())];
}

std::optional<LunarDate> LunarTable::to_lunar(int32_t serial) const {
  if (serial < coverage_first() || serial > coverage_last_) return std::nullopt;
  auto it = std::upper_bound(records_.begin(), records_.end(), serial,
                             [](int32_t s, const YearRecord& r) { return s < r.new_year; });
  const YearRecord& rec = *std::prev(it);
  int32_t offset = serial - rec.new_year;
  for (std::size_t i = 0; i < rec.month_lengths.size(); ++i) {
    if (offset < rec.month_lengths[i]) {
      LunarDate ld;
      ld.lunar_year = rec.lunar_year;
      ld.lunar_day = offset + 1;
      int idx = static_cast<int>(i);
      if (rec.leap_month == 0 || idx < rec.leap_month) {
        ld.lunar_month = idx + 1;
      } else if (idx == rec.leap_month) {
        ld.lunar_month = rec.leap_month;
        ld.is_leap_month = true;
      } else {
        ld.lunar_month = idx;
      }
      return ld;
    }
    offset -= rec.month_lengths[i];
  }
  return std::nullopt;  // unreachable given the continuity check
}

std::optional<LunarDate> LunarTable::to_lunar(const Date& d) const {
  return to_lunar(to_serial(d));
}

Date LunarTable::from_lunar(const LunarDate& ld) const {
  const YearRecord& rec = record(ld.lunar_year);
  if (ld.lunar_month < 1 || ld.lunar_month > 12) {
    throw validation_error("lunar month out of range: " + std::to_string(ld.lunar_month));
  }
  int idx;
  if (ld.is_leap_month) {
    if (rec.leap_month != ld.lunar_month) {
      throw validation_error("lunar year " + std::to_string(ld.lunar_year) +
                             " has no leap month " + std::to_string(ld.lunar_month));
    }
    idx = rec.leap_month;
  } else {
    idx = (rec.leap_month == 0 || ld.lunar_month <= rec.leap_month)
              ? ld.lunar_month - 1
              : ld.lunar_month;
  }
  if (ld.lunar_day < 1 || ld.lunar_day > rec.month_lengths[static_cast<std::size_t>(idx)]) {
    throw validation_error("lunar day out of range for that month: " +
                           std::to_string(ld.lunar_day));
  }
  int32_t serial = rec.new_year;
  for (int i = 0; i < idx; ++i) serial += rec.month_lengths[static_cast<std::size_t>(i)];
  return from_serial(serial + ld.lunar_day - 1);
}

std::optional<Zodiac> LunarTable::zodiac_of(int32_t serial) const {
  auto ld = to_lunar(serial);
  if (!ld) return std::nullopt;
  return zodiac_of_lunar_year(ld->lunar_year);
}

std::optional<Zodiac> LunarTable::zodiac_of(const Date& d) const {
  return zodiac_of(to_serial(d));
}

}  // namespace timepuzzles
