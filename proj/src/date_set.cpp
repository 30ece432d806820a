#include "timepuzzles/date_set.hpp"

#include <algorithm>
#include <cassert>

namespace timepuzzles {

DateSet DateSet::from_sorted(std::vector<int32_t> serials) {
  assert(std::is_sorted(serials.begin(), serials.end()));
  DateSet s;
  s.serials_ = std::move(serials);
  return s;
}

DateSet DateSet::from_dates(const std::vector<Date>& dates) {
  std::vector<int32_t> serials;
  serials.reserve(dates.size());
  for (const Date& d : dates) serials.push_back(to_serial(d));
  std::sort(serials.begin(), serials.end());
  serials.erase(std::unique(serials.begin(), serials.end()), serials.end());
  return from_sorted(std::move(serials));
}

DateSet DateSet::from_ranges(const std::vector<std::pair<int32_t, int32_t>>& ranges) {
  std::vector<int32_t> serials;
  for (const auto& [first, last] : ranges) {
    for (int64_t s = first; s <= last; ++s) serials.push_back(static_cast<int32_t>(s));
  }
  return from_sorted(std::move(serials));
}

bool DateSet::contains(int32_t serial) const {
  return std::binary_search(serials_.begin(), serials_.end(), serial);
}

std::vector<Date> DateSet::dates() const {
  std::vector<Date> out;
  out.reserve(serials_.size());
  for (int32_t s : serials_) out.push_back(from_serial(s));
  return out;
}

std::vector<std::string> DateSet::date_strings() const {
  std::vector<std::string> out;
  out.reserve(serials_.size());
  for (int32_t s : serials_) out.push_back(to_string(from_serial(s)));
  return out;
}

DateSet DateSet::intersect(const DateSet& other) const {
  std::vector<int32_t> out;
  std::set_intersection(serials_.begin(), serials_.end(),
                        other.serials_.begin(), other.serials_.end(),
                        std::back_inserter(out));
  return from_sorted(std::move(out));
}

}  // namespace timepuzzles
