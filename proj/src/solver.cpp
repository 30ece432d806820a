#include "timepuzzles/solver.hpp"

#include <algorithm>
#include <numeric>

namespace timepuzzles {

DateSet solve(const FactSet& facts, const DateUniverse& u,
              const KnowledgeBase& kb, const LunarTable& lunar) {
  if (facts.empty()) {
    return DateSet::from_ranges({{u.first_serial(), u.last_serial()}});
  }

  std::vector<RangeList> ranges(facts.size());
  std::vector<int64_t> cards(facts.size());
  for (std::size_t i = 0; i < facts.size(); ++i) {
    ranges[i] = constraint_ranges(facts[i], u, kb, lunar);
    cards[i] = ranges_size(ranges[i]);
  }

  // Descending information gain == ascending cardinality; an empty
  // constraint set (undefined, infinite gain) goes first and empties the
  // intersection immediately. stable_sort keeps input order on ties.
  std::vector<std::size_t> order(facts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cards[a] < cards[b]; });

  DateSet result = DateSet::from_ranges(ranges[order[0]]);
  for (std::size_t k = 1; k < order.size() && !result.empty(); ++k) {
    const RangeList& r = ranges[order[k]];
    result.keep_if([&](int32_t s) { return ranges_contain(r, s); });
  }
  return result;
}

DateSet solve_naive(const FactSet& facts, const DateUniverse& u,
                    const KnowledgeBase& kb, const LunarTable& lunar) {
  std::vector<int32_t> hits;
  for (int32_t s = u.first_serial(); s <= u.last_serial(); ++s) {
    Date d = from_serial(s);
    bool ok = true;
    for (const Fact& f : facts) {
      if (!holds(f, d, s, kb, lunar)) {
        ok = false;
        break;
      }
    }
    if (ok) hits.push_back(s);
  }
  return DateSet::from_sorted(std::move(hits));
}

}  // namespace timepuzzles
