#pragma once

#include <cstdint>
#include <vector>

#include "timepuzzles/date.hpp"

namespace timepuzzles {

// Sorted set of serial day numbers. Answer sets are tiny; constraint sets can
// be large, so bulk construction goes through ranges.
class DateSet {
 public:
  DateSet() = default;

  // `serials` must already be sorted and duplicate free.
  static DateSet from_sorted(std::vector<int32_t> serials);
  static DateSet from_dates(const std::vector<Date>& dates);  // sorts, dedups
  static DateSet from_ranges(const std::vector<std::pair<int32_t, int32_t>>& ranges);

  std::size_t size() const { return serials_.size(); }
  bool empty() const { return serials_.empty(); }
  bool contains(int32_t serial) const;
  const std::vector<int32_t>& serials() const { return serials_; }
  std::vector<Date> dates() const;
  std::vector<std::string> date_strings() const;

  DateSet intersect(const DateSet& other) const;

  template <class Pred>
  void keep_if(Pred pred) {
    std::size_t out = 0;
    for (int32_t s : serials_) {
      if (pred(s)) serials_[out++] = s;
    }
    serials_.resize(out);
  }

  bool operator==(const DateSet&) const = default;

 private:
  std::vector<int32_t> serials_;
};

}  // namespace timepuzzles
