#include "timepuzzles/facts.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "timepuzzles/errors.hpp"
#include "timepuzzles/rng.hpp"

namespace timepuzzles {

namespace {

struct KindInfo {
  FactKind kind;
  const char* name;
  // Fixed level for every kind except KnowledgeBaseEvent and the explicit
  // rewrite targets, whose level comes from the fact they stand in for.
  std::optional<ConstraintLevel> level;
  bool implicit;
};

constexpr KindInfo kKinds[] = {
    {FactKind::ExplicitYear, "ExplicitYear", ConstraintLevel::Year, true},
    {FactKind::Decade, "Decade", ConstraintLevel::Year, true},
    {FactKind::LeapYear, "LeapYear", ConstraintLevel::Year, true},
    {FactKind::ChineseZodiac, "ChineseZodiac", ConstraintLevel::Year, true},
    {FactKind::PersonAlive, "PersonAlive", ConstraintLevel::Year, true},
    {FactKind::USPresident, "USPresident", ConstraintLevel::Year, true},
    {FactKind::Event, "Event", ConstraintLevel::Year, true},
    {FactKind::Month, "Month", ConstraintLevel::Month, true},
    {FactKind::Season, "Season", ConstraintLevel::Month, true},
    {FactKind::LunarMonth, "LunarMonth", ConstraintLevel::Month, true},
    {FactKind::WeekdayInMonth, "WeekdayInMonth", ConstraintLevel::Day, true},
    {FactKind::DayOfMonth, "DayOfMonth", ConstraintLevel::Day, true},
    {FactKind::Weekday, "Weekday", ConstraintLevel::Day, true},
    {FactKind::MultiWeekday, "MultiWeekday", ConstraintLevel::Day, true},
    {FactKind::DayOfMonthRange, "DayOfMonthRange", ConstraintLevel::Day, true},
    {FactKind::KnowledgeBaseEvent, "KnowledgeBaseEvent", std::nullopt, true},
    {FactKind::ExplicitYearRange, "ExplicitYearRange", std::nullopt, false},
    {FactKind::ExplicitYearSet, "ExplicitYearSet", std::nullopt, false},
    {FactKind::ExplicitDateRange, "ExplicitDateRange", std::nullopt, false},
    {FactKind::ExplicitDateRangeUnion, "ExplicitDateRangeUnion", std::nullopt, false},
};

const KindInfo& info_of(FactKind kind) { return kKinds[static_cast<int>(kind)]; }

std::string ordinal(int n) {
  const char* suffix = "th";
  if (n % 100 < 11 || n % 100 > 13) {
    switch (n % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
    }
  }
  return std::to_string(n) + suffix;
}

int32_t year_first(int year) { return to_serial(Date{year, 1, 1}); }
int32_t year_last(int year) { return to_serial(Date{year, 12, 31}); }
int32_t month_first(int year, int month) { return to_serial(Date{year, month, 1}); }
int32_t month_last(int year, int month) {
  return to_serial(Date{year, month, days_in_month(year, month)});
}

int32_t record_last_day(const LunarTable::YearRecord& rec) {
  int32_t total = 0;
  for (int len : rec.month_lengths) total += len;
  return rec.new_year + total - 1;
}

// Month number carried by the i-th civil month of a lunar year record.
int lunar_month_number(const LunarTable::YearRecord& rec, int idx) {
  if (rec.leap_month == 0 || idx < rec.leap_month) return idx + 1;
  if (idx == rec.leap_month) return rec.leap_month;
  return idx;
}

template <class T>
const T& params_of(const Fact& fact) {
  const T* p = std::get_if<T>(&fact.params);
  if (!p) {
    throw validation_error(std::string("fact parameters do not match kind ") +
                           to_string(fact.kind));
  }
  return *p;
}

}  // namespace

const char* to_string(ConstraintLevel level) {
  switch (level) {
    case ConstraintLevel::Year: return "Year";
    case ConstraintLevel::Month: return "Month";
    case ConstraintLevel::Day: return "Day";
  }
  return "";
}

std::optional<ConstraintLevel> level_from_string(std::string_view name) {
  for (int i = 0; i < 3; ++i) {
    auto level = static_cast<ConstraintLevel>(i);
    if (name == to_string(level)) return level;
  }
  return std::nullopt;
}

const char* to_string(FactKind kind) { return info_of(kind).name; }

std::optional<FactKind> fact_kind_from_string(std::string_view name) {
  for (const auto& info : kKinds) {
    if (name == info.name) return info.kind;
  }
  return std::nullopt;
}

bool is_implicit_kind(FactKind kind) { return info_of(kind).implicit; }

const char* to_string(EventFamily f) {
  return f == EventFamily::Olympics ? "olympics" : "world-cup";
}

const char* to_string(DayOfMonthSpec s) {
  switch (s) {
    case DayOfMonthSpec::Exact: return "exact";
    case DayOfMonthSpec::First: return "first";
    case DayOfMonthSpec::Last: return "last";
  }
  return "";
}

const char* to_string(RangeDirection d) {
  return d == RangeDirection::Before ? "before" : "after";
}

const char* to_string(KBRelation r) {
  switch (r) {
    case KBRelation::SameDay: return "same-day";
    case KBRelation::SameMonth: return "same-month";
    case KBRelation::SameYear: return "same-year";
    case KBRelation::WithinSpan: return "within-span";
  }
  return "";
}

RangeList normalize_ranges(RangeList ranges, const DateUniverse& u) {
  std::sort(ranges.begin(), ranges.end());
  RangeList out;
  for (const auto& r : ranges) {
    int32_t first = std::max(r.first, u.first_serial());
    int32_t last = std::min(r.second, u.last_serial());
    if (first > last) continue;
    if (!out.empty() && first <= out.back().second + 1) {
      out.back().second = std::max(out.back().second, last);
    } else {
      out.emplace_back(first, last);
    }
  }
  return out;
}

int64_t ranges_size(const RangeList& ranges) {
  int64_t total = 0;
  for (const auto& [first, last] : ranges) total += int64_t{last} - first + 1;
  return total;
}

bool ranges_contain(const RangeList& ranges, int32_t serial) {
  auto it = std::upper_bound(
      ranges.begin(), ranges.end(), serial,
      [](int32_t s, const auto& r) { return s < r.first; });
  return it != ranges.begin() && serial <= std::prev(it)->second;
}

bool holds(const Fact& fact, const Date& d, int32_t serial,
           const KnowledgeBase& kb, const LunarTable& lunar) {
  switch (fact.kind) {
    case FactKind::ExplicitYear:
      return d.year == params_of<ExplicitYearParams>(fact).year;
    case FactKind::Decade: {
      int decade = params_of<DecadeParams>(fact).decade;
      return d.year >= decade && d.year < decade + 10;
    }
    case FactKind::LeapYear:
      return is_leap_year(d.year);
    case FactKind::ChineseZodiac:
      return lunar.zodiac_of(serial) == params_of<ChineseZodiacParams>(fact).animal;
    case FactKind::PersonAlive:
      return kb.get(params_of<PersonAliveParams>(fact).person_id).spans_day(serial);
    case FactKind::USPresident:
      return kb.get(params_of<USPresidentParams>(fact).president_id).spans_day(serial);
    case FactKind::Event: {
      const auto& years = params_of<EventParams>(fact).family == EventFamily::Olympics
                              ? kb.olympic_years()
                              : kb.worldcup_years();
      return std::binary_search(years.begin(), years.end(), d.year);
    }
    case FactKind::Month:
      return d.month == params_of<MonthParams>(fact).month;
    case FactKind::Season:
      return season_of(d.month) == params_of<SeasonParams>(fact).season;
    case FactKind::LunarMonth: {
      auto ld = lunar.to_lunar(serial);
      return ld && ld->lunar_month == params_of<LunarMonthParams>(fact).month;
    }
    case FactKind::WeekdayInMonth: {
      const auto& p = params_of<WeekdayInMonthParams>(fact);
      return weekday_of_serial(serial) == p.weekday && (d.day + 6) / 7 == p.n;
    }
    case FactKind::DayOfMonth: {
      const auto& p = params_of<DayOfMonthParams>(fact);
      switch (p.spec) {
        case DayOfMonthSpec::Exact: return d.day == p.day;
        case DayOfMonthSpec::First: return d.day == 1;
        case DayOfMonthSpec::Last: return d.day == days_in_month(d.year, d.month);
      }
      return false;
    }
    case FactKind::Weekday:
      return weekday_of_serial(serial) == params_of<WeekdayParams>(fact).weekday;
    case FactKind::MultiWeekday: {
      const auto& days = params_of<MultiWeekdayParams>(fact).weekdays;
      Weekday w = weekday_of_serial(serial);
      return std::find(days.begin(), days.end(), w) != days.end();
    }
    case FactKind::DayOfMonthRange: {
      const auto& p = params_of<DayOfMonthRangeParams>(fact);
      return p.direction == RangeDirection::Before ? d.day < p.day : d.day > p.day;
    }
    case FactKind::KnowledgeBaseEvent: {
      const auto& p = params_of<KnowledgeBaseEventParams>(fact);
      const KBEvent& ev = kb.get(p.event_id);
      switch (p.relation) {
        case KBRelation::SameDay:
          return serial == to_serial(ev.first_day());
        case KBRelation::SameMonth:
          return d.year == ev.start.year && d.month == ev.start.month;
        case KBRelation::SameYear:
          return d.year >= ev.start.year && d.year <= ev.end.year;
        case KBRelation::WithinSpan:
          return ev.spans_day(serial);
      }
      return false;
    }
    case FactKind::ExplicitYearRange: {
      const auto& p = params_of<ExplicitYearRangeParams>(fact);
      return d.year >= p.first_year && d.year <= p.last_year;
    }
    case FactKind::ExplicitYearSet: {
      const auto& years = params_of<ExplicitYearSetParams>(fact).years;
      return std::binary_search(years.begin(), years.end(), d.year);
    }
    case FactKind::ExplicitDateRange: {
      const auto& p = params_of<ExplicitDateRangeParams>(fact);
      return serial >= to_serial(p.first) && serial <= to_serial(p.last);
    }
    case FactKind::ExplicitDateRangeUnion: {
      for (const auto& [first, last] : params_of<ExplicitDateRangeUnionParams>(fact).ranges) {
        if (serial >= to_serial(first) && serial <= to_serial(last)) return true;
      }
      return false;
    }
  }
  return false;
}

bool holds(const Fact& fact, const Date& d, const KnowledgeBase& kb,
           const LunarTable& lunar) {
  return holds(fact, d, to_serial(d), kb, lunar);
}

RangeList constraint_ranges(const Fact& fact, const DateUniverse& u,
                            const KnowledgeBase& kb, const LunarTable& lunar) {
  RangeList raw;
  int y0 = u.start().year;
  int y1 = u.end().year;
  switch (fact.kind) {
    case FactKind::ExplicitYear: {
      int y = params_of<ExplicitYearParams>(fact).year;
      raw.emplace_back(year_first(y), year_last(y));
      break;
    }
    case FactKind::Decade: {
      int dec = params_of<DecadeParams>(fact).decade;
      raw.emplace_back(year_first(dec), year_last(dec + 9));
      break;
    }
    case FactKind::LeapYear:
      for (int y = y0; y <= y1; ++y) {
        if (is_leap_year(y)) raw.emplace_back(year_first(y), year_last(y));
      }
      break;
    case FactKind::ChineseZodiac: {
      Zodiac z = params_of<ChineseZodiacParams>(fact).animal;
      for (const auto& rec : lunar.records()) {
        if (zodiac_of_lunar_year(rec.lunar_year) == z) {
          raw.emplace_back(rec.new_year, record_last_day(rec));
        }
      }
      break;
    }
    case FactKind::PersonAlive: {
      const KBEvent& ev = kb.get(params_of<PersonAliveParams>(fact).person_id);
      raw.emplace_back(to_serial(ev.first_day()), to_serial(ev.last_day()));
      break;
    }
    case FactKind::USPresident: {
      const KBEvent& ev = kb.get(params_of<USPresidentParams>(fact).president_id);
      raw.emplace_back(to_serial(ev.first_day()), to_serial(ev.last_day()));
      break;
    }
    case FactKind::Event: {
      const auto& years = params_of<EventParams>(fact).family == EventFamily::Olympics
                              ? kb.olympic_years()
                              : kb.worldcup_years();
      for (int y : years) raw.emplace_back(year_first(y), year_last(y));
      break;
    }
    case FactKind::Month: {
      int m = params_of<MonthParams>(fact).month;
      for (int y = y0; y <= y1; ++y) raw.emplace_back(month_first(y, m), month_last(y, m));
      break;
    }
    case FactKind::Season: {
      Season s = params_of<SeasonParams>(fact).season;
      for (int y = y0; y <= y1; ++y) {
        if (s == Season::Winter) {
          raw.emplace_back(month_first(y, 1), month_last(y, 2));
          raw.emplace_back(month_first(y, 12), month_last(y, 12));
        } else {
          int m0 = 3 * static_cast<int>(s);  // Spring -> 3, Summer -> 6, Autumn -> 9
          raw.emplace_back(month_first(y, m0), month_last(y, m0 + 2));
        }
      }
      break;
    }
    case FactKind::LunarMonth: {
      int m = params_of<LunarMonthParams>(fact).month;
      for (const auto& rec : lunar.records()) {
        int32_t start = rec.new_year;
        for (std::size_t i = 0; i < rec.month_lengths.size(); ++i) {
          int len = rec.month_lengths[i];
          if (lunar_month_number(rec, static_cast<int>(i)) == m) {
            raw.emplace_back(start, start + len - 1);
          }
          start += len;
        }
      }
      break;
    }
    case FactKind::WeekdayInMonth: {
      const auto& p = params_of<WeekdayInMonthParams>(fact);
      for (int y = y0; y <= y1; ++y) {
        for (int m = 1; m <= 12; ++m) {
          Weekday w0 = weekday_of_serial(month_first(y, m));
          int day = 1 +
                    (static_cast<int>(p.weekday) - static_cast<int>(w0) + 7) % 7 +
                    (p.n - 1) * 7;
          if (day <= days_in_month(y, m)) {
            int32_t s = month_first(y, m) + day - 1;
            raw.emplace_back(s, s);
          }
        }
      }
      break;
    }
    case FactKind::DayOfMonth: {
      const auto& p = params_of<DayOfMonthParams>(fact);
      for (int y = y0; y <= y1; ++y) {
        for (int m = 1; m <= 12; ++m) {
          int len = days_in_month(y, m);
          int day = 0;
          switch (p.spec) {
            case DayOfMonthSpec::Exact: day = p.day <= len ? p.day : 0; break;
            case DayOfMonthSpec::First: day = 1; break;
            case DayOfMonthSpec::Last: day = len; break;
          }
          if (day > 0) {
            int32_t s = month_first(y, m) + day - 1;
            raw.emplace_back(s, s);
          }
        }
      }
      break;
    }
    case FactKind::Weekday:
    case FactKind::MultiWeekday: {
      std::vector<Weekday> days;
      if (fact.kind == FactKind::Weekday) {
        days.push_back(params_of<WeekdayParams>(fact).weekday);
      } else {
        days = params_of<MultiWeekdayParams>(fact).weekdays;
      }
      for (Weekday w : days) {
        int delta = (static_cast<int>(w) -
                     static_cast<int>(weekday_of_serial(u.first_serial())) + 7) % 7;
        for (int64_t s = u.first_serial() + delta; s <= u.last_serial(); s += 7) {
          raw.emplace_back(static_cast<int32_t>(s), static_cast<int32_t>(s));
        }
      }
      break;
    }
    case FactKind::DayOfMonthRange: {
      const auto& p = params_of<DayOfMonthRangeParams>(fact);
      for (int y = y0; y <= y1; ++y) {
        for (int m = 1; m <= 12; ++m) {
          int len = days_in_month(y, m);
          int lo = p.direction == RangeDirection::Before ? 1 : p.day + 1;
          int hi = p.direction == RangeDirection::Before ? std::min(p.day - 1, len) : len;
          if (lo <= hi) {
            raw.emplace_back(month_first(y, m) + lo - 1, month_first(y, m) + hi - 1);
          }
        }
      }
      break;
    }
    case FactKind::KnowledgeBaseEvent: {
      const auto& p = params_of<KnowledgeBaseEventParams>(fact);
      const KBEvent& ev = kb.get(p.event_id);
      switch (p.relation) {
        case KBRelation::SameDay: {
          int32_t s = to_serial(ev.first_day());
          raw.emplace_back(s, s);
          break;
        }
        case KBRelation::SameMonth:
          raw.emplace_back(month_first(ev.start.year, ev.start.month),
                           month_last(ev.start.year, ev.start.month));
          break;
        case KBRelation::SameYear:
          raw.emplace_back(year_first(ev.start.year), year_last(ev.end.year));
          break;
        case KBRelation::WithinSpan:
          raw.emplace_back(to_serial(ev.first_day()), to_serial(ev.last_day()));
          break;
      }
      break;
    }
    case FactKind::ExplicitYearRange: {
      const auto& p = params_of<ExplicitYearRangeParams>(fact);
      raw.emplace_back(year_first(p.first_year), year_last(p.last_year));
      break;
    }
    case FactKind::ExplicitYearSet:
      for (int y : params_of<ExplicitYearSetParams>(fact).years) {
        raw.emplace_back(year_first(y), year_last(y));
      }
      break;
    case FactKind::ExplicitDateRange: {
      const auto& p = params_of<ExplicitDateRangeParams>(fact);
      raw.emplace_back(to_serial(p.first), to_serial(p.last));
      break;
    }
    case FactKind::ExplicitDateRangeUnion:
      for (const auto& [first, last] : params_of<ExplicitDateRangeUnionParams>(fact).ranges) {
        raw.emplace_back(to_serial(first), to_serial(last));
      }
      break;
  }
  return normalize_ranges(std::move(raw), u);
}

int64_t constraint_cardinality(const Fact& fact, const DateUniverse& u,
                               const KnowledgeBase& kb, const LunarTable& lunar) {
  return ranges_size(constraint_ranges(fact, u, kb, lunar));
}

double information_gain(const Fact& fact, const DateUniverse& u,
                        const KnowledgeBase& kb, const LunarTable& lunar) {
  int64_t card = constraint_cardinality(fact, u, kb, lunar);
  if (card == 0) {
    throw validation_error(std::string("information gain undefined: kind ") +
                           to_string(fact.kind) +
                           " has an empty constraint set in this universe");
  }
  return std::log2(static_cast<double>(u.size())) -
         std::log2(static_cast<double>(card));
}

std::vector<KBRelation> eligible_relations(const KBEvent& ev) {
  std::vector<KBRelation> out;
  if (ev.is_point()) {
    if (ev.precision == Precision::Day) out.push_back(KBRelation::SameDay);
    if (ev.precision != Precision::Year) out.push_back(KBRelation::SameMonth);
    out.push_back(KBRelation::SameYear);
  } else {
    if (ev.start.year == ev.end.year && ev.start.month == ev.end.month &&
        ev.precision == Precision::Day) {
      out.push_back(KBRelation::SameMonth);
    }
    out.push_back(KBRelation::SameYear);
    out.push_back(KBRelation::WithinSpan);
  }
  return out;
}

ConstraintLevel relation_level(KBRelation r) {
  switch (r) {
    case KBRelation::SameDay: return ConstraintLevel::Day;
    case KBRelation::SameMonth: return ConstraintLevel::Month;
    case KBRelation::SameYear: return ConstraintLevel::Year;
    case KBRelation::WithinSpan: return ConstraintLevel::Day;
  }
  return ConstraintLevel::Day;
}

Fact make_anchor_fact(const KBEvent& ev, Rng& rng) {
  auto rels = eligible_relations(ev);
  KBRelation rel = rels[rng.index(rels.size())];
  return Fact{FactKind::KnowledgeBaseEvent, relation_level(rel),
              KnowledgeBaseEventParams{ev.id, rel}};
}

Fact instantiate_fact(FactKind kind, const Date& seed, Rng& rng,
                      const KnowledgeBase& kb, const LunarTable& lunar) {
  int32_t serial = to_serial(seed);
  ConstraintLevel level = info_of(kind).level.value_or(ConstraintLevel::Day);
  auto fail = [&](const std::string& why) -> Fact {
    throw instantiation_error(std::string(to_string(kind)) + " on " +
                              to_string(seed) + ": " + why);
  };
  switch (kind) {
    case FactKind::ExplicitYear:
      return {kind, level, ExplicitYearParams{seed.year}};
    case FactKind::Decade:
      return {kind, level, DecadeParams{seed.year - seed.year % 10}};
    case FactKind::LeapYear:
      if (!is_leap_year(seed.year)) return fail("not a leap year");
      return {kind, level, LeapYearParams{}};
    case FactKind::ChineseZodiac: {
      auto z = lunar.zodiac_of(serial);
      if (!z) return fail("outside lunar table coverage");
      return {kind, level, ChineseZodiacParams{*z}};
    }
    case FactKind::PersonAlive: {
      std::vector<const KBEvent*> alive;
      for (const KBEvent* ev : kb.lifespans()) {
        if (ev->spans_day(serial)) alive.push_back(ev);
      }
      if (alive.empty()) return fail("no tabulated person alive");
      return {kind, level, PersonAliveParams{alive[rng.index(alive.size())]->id}};
    }
    case FactKind::USPresident: {
      for (const KBEvent* ev : kb.presidents()) {
        if (ev->spans_day(serial)) {
          return {kind, level, USPresidentParams{ev->id}};
        }
      }
      return fail("no tabulated president in office");
    }
    case FactKind::Event: {
      std::vector<EventFamily> families;
      if (std::binary_search(kb.olympic_years().begin(), kb.olympic_years().end(),
                             seed.year)) {
        families.push_back(EventFamily::Olympics);
      }
      if (std::binary_search(kb.worldcup_years().begin(), kb.worldcup_years().end(),
                             seed.year)) {
        families.push_back(EventFamily::WorldCup);
      }
      if (families.empty()) return fail("no tabulated event that year");
      return {kind, level, EventParams{families[rng.index(families.size())]}};
    }
    case FactKind::Month:
      return {kind, level, MonthParams{seed.month}};
    case FactKind::Season:
      return {kind, level, SeasonParams{season_of(seed.month)}};
    case FactKind::LunarMonth: {
      auto ld = lunar.to_lunar(serial);
      if (!ld) return fail("outside lunar table coverage");
      return {kind, level, LunarMonthParams{ld->lunar_month}};
    }
    case FactKind::WeekdayInMonth: {
      NthWeekday nw = nth_weekday_occurrence(seed);
      return {kind, level, WeekdayInMonthParams{nw.n, nw.weekday}};
    }
    case FactKind::DayOfMonth: {
      std::vector<DayOfMonthSpec> specs{DayOfMonthSpec::Exact};
      if (seed.day == 1) specs.push_back(DayOfMonthSpec::First);
      if (seed.day == days_in_month(seed.year, seed.month)) {
        specs.push_back(DayOfMonthSpec::Last);
      }
      DayOfMonthSpec spec = specs[rng.index(specs.size())];
      return {kind, level,
              DayOfMonthParams{spec, spec == DayOfMonthSpec::Exact ? seed.day : 0}};
    }
    case FactKind::Weekday:
      return {kind, level, WeekdayParams{weekday_of_serial(serial)}};
    case FactKind::MultiWeekday: {
      int count = 2 + static_cast<int>(rng.index(2));
      std::vector<Weekday> days{weekday_of_serial(serial)};
      while (static_cast<int>(days.size()) < count) {
        Weekday w = static_cast<Weekday>(rng.index(7));
        if (std::find(days.begin(), days.end(), w) == days.end()) days.push_back(w);
      }
      std::sort(days.begin(), days.end());
      return {kind, level, MultiWeekdayParams{std::move(days)}};
    }
    case FactKind::DayOfMonthRange: {
      std::vector<RangeDirection> dirs;
      if (seed.day < 31) dirs.push_back(RangeDirection::Before);
      if (seed.day > 1) dirs.push_back(RangeDirection::After);
      RangeDirection dir = dirs[rng.index(dirs.size())];
      int bound = dir == RangeDirection::Before
                      ? static_cast<int>(rng.uniform(seed.day + 1, 31))
                      : static_cast<int>(rng.uniform(1, seed.day - 1));
      return {kind, level, DayOfMonthRangeParams{bound, dir}};
    }
    case FactKind::KnowledgeBaseEvent: {
      std::vector<std::pair<const KBEvent*, KBRelation>> options;
      for (const KBEvent* ev : kb.anchors()) {
        for (KBRelation rel : eligible_relations(*ev)) {
          Fact f{kind, relation_level(rel), KnowledgeBaseEventParams{ev->id, rel}};
          if (holds(f, seed, serial, kb, lunar)) options.emplace_back(ev, rel);
        }
      }
      if (options.empty()) return fail("no anchor event relates to this date");
      auto [ev, rel] = options[rng.index(options.size())];
      return {kind, relation_level(rel), KnowledgeBaseEventParams{ev->id, rel}};
    }
    default:
      return fail("not an instantiable kind");
  }
}

std::string render(const Fact& fact, const KnowledgeBase& kb) {
  std::ostringstream out;
  switch (fact.kind) {
    case FactKind::ExplicitYear:
      out << "The year is " << params_of<ExplicitYearParams>(fact).year << ".";
      break;
    case FactKind::Decade:
      out << "The date falls within the " << params_of<DecadeParams>(fact).decade
          << "s.";
      break;
    case FactKind::LeapYear:
      out << "The year is a leap year.";
      break;
    case FactKind::ChineseZodiac:
      out << "According to the Chinese zodiac, it is the year of the "
          << to_string(params_of<ChineseZodiacParams>(fact).animal) << ".";
      break;
    case FactKind::PersonAlive:
      out << kb.get(params_of<PersonAliveParams>(fact).person_id).description
          << " was alive on this date.";
      break;
    case FactKind::USPresident:
      out << kb.get(params_of<USPresidentParams>(fact).president_id).description
          << " was the President of the United States on this date.";
      break;
    case FactKind::Event:
      out << (params_of<EventParams>(fact).family == EventFamily::Olympics
                  ? "The Olympic Games were held in this year."
                  : "The FIFA World Cup was held in this year.");
      break;
    case FactKind::Month:
      out << "The month is " << month_name(params_of<MonthParams>(fact).month) << ".";
      break;
    case FactKind::Season:
      out << "The season is " << to_string(params_of<SeasonParams>(fact).season) << ".";
      break;
    case FactKind::LunarMonth:
      out << "It is the " << ordinal(params_of<LunarMonthParams>(fact).month)
          << " month in the Chinese lunar calendar.";
      break;
    case FactKind::WeekdayInMonth: {
      const auto& p = params_of<WeekdayInMonthParams>(fact);
      out << "It is the " << ordinal(p.n) << " " << to_string(p.weekday)
          << " of the month.";
      break;
    }
    case FactKind::DayOfMonth: {
      const auto& p = params_of<DayOfMonthParams>(fact);
      switch (p.spec) {
        case DayOfMonthSpec::Exact:
          out << "The day of the month is " << p.day << ".";
          break;
        case DayOfMonthSpec::First:
          out << "It is the first day of the month.";
          break;
        case DayOfMonthSpec::Last:
          out << "It is the last day of the month.";
          break;
      }
      break;
    }
    case FactKind::Weekday:
      out << "It is " << to_string(params_of<WeekdayParams>(fact).weekday) << ".";
      break;
    case FactKind::MultiWeekday: {
      const auto& days = params_of<MultiWeekdayParams>(fact).weekdays;
      out << "It is either ";
      if (days.size() == 2) {
        out << to_string(days[0]) << " or " << to_string(days[1]);
      } else {
        for (std::size_t i = 0; i + 1 < days.size(); ++i) out << to_string(days[i]) << ", ";
        out << "or " << to_string(days.back());
      }
      out << ".";
      break;
    }
    case FactKind::DayOfMonthRange: {
      const auto& p = params_of<DayOfMonthRangeParams>(fact);
      out << "The day of the month is strictly "
          << (p.direction == RangeDirection::Before ? "before" : "after") << " day "
          << p.day << ".";
      break;
    }
    case FactKind::KnowledgeBaseEvent: {
      const auto& p = params_of<KnowledgeBaseEventParams>(fact);
      const KBEvent& ev = kb.get(p.event_id);
      // Point events carry clause descriptions ("X happened"), spans carry
      // noun phrases ("the X crisis"); templates differ accordingly.
      switch (p.relation) {
        case KBRelation::SameDay:
          out << "This date is the exact day when " << ev.description << ".";
          break;
        case KBRelation::SameMonth:
          if (ev.is_point()) {
            out << "This date is in the same month and year as when "
                << ev.description << ".";
          } else {
            out << "This date is in the same month and year as " << ev.description
                << ".";
          }
          break;
        case KBRelation::SameYear:
          if (ev.is_point()) {
            out << "This date is in the same year as when " << ev.description << ".";
          } else {
            out << "This date is in the same year as " << ev.description << ".";
          }
          break;
        case KBRelation::WithinSpan:
          out << "This date falls within " << ev.description << ".";
          break;
      }
      break;
    }
    case FactKind::ExplicitYearRange: {
      const auto& p = params_of<ExplicitYearRangeParams>(fact);
      out << "The year is between " << p.first_year << " and " << p.last_year
          << " (inclusive).";
      break;
    }
    case FactKind::ExplicitYearSet: {
      const auto& years = params_of<ExplicitYearSetParams>(fact).years;
      out << "The year is one of the following: ";
      for (std::size_t i = 0; i < years.size(); ++i) {
        if (i) out << ", ";
        out << years[i];
      }
      out << ".";
      break;
    }
    case FactKind::ExplicitDateRange: {
      const auto& p = params_of<ExplicitDateRangeParams>(fact);
      if (p.first == p.last) {
        out << "The date is " << to_string(p.first) << ".";
      } else {
        out << "The date falls between " << to_string(p.first) << " and "
            << to_string(p.last) << " (inclusive).";
      }
      break;
    }
    case FactKind::ExplicitDateRangeUnion: {
      const auto& ranges = params_of<ExplicitDateRangeUnionParams>(fact).ranges;
      out << "The date falls within one of the following ranges (inclusive): ";
      for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (i) out << ", ";
        out << to_string(ranges[i].first) << " to " << to_string(ranges[i].second);
      }
      out << ".";
      break;
    }
  }
  return out.str();
}

Fact rewrite_explicit(const Fact& fact, const KnowledgeBase& kb,
                      const LunarTable& lunar) {
  auto span_union = [&](auto&& keep) {
    std::vector<std::pair<Date, Date>> ranges;
    for (const auto& rec : lunar.records()) {
      int32_t start = rec.new_year;
      for (std::size_t i = 0; i < rec.month_lengths.size(); ++i) {
        int len = rec.month_lengths[i];
        if (keep(rec, static_cast<int>(i))) {
          ranges.emplace_back(from_serial(start), from_serial(start + len - 1));
        }
        start += len;
      }
    }
    return ranges;
  };
  switch (fact.kind) {
    case FactKind::ChineseZodiac: {
      Zodiac z = params_of<ChineseZodiacParams>(fact).animal;
      std::vector<std::pair<Date, Date>> ranges;
      for (const auto& rec : lunar.records()) {
        if (zodiac_of_lunar_year(rec.lunar_year) == z) {
          ranges.emplace_back(from_serial(rec.new_year),
                              from_serial(record_last_day(rec)));
        }
      }
      return {FactKind::ExplicitDateRangeUnion, fact.level,
              ExplicitDateRangeUnionParams{std::move(ranges)}};
    }
    case FactKind::LunarMonth: {
      int m = params_of<LunarMonthParams>(fact).month;
      auto ranges = span_union([m](const LunarTable::YearRecord& rec, int idx) {
        return lunar_month_number(rec, idx) == m;
      });
      return {FactKind::ExplicitDateRangeUnion, fact.level,
              ExplicitDateRangeUnionParams{std::move(ranges)}};
    }
    case FactKind::PersonAlive: {
      const KBEvent& ev = kb.get(params_of<PersonAliveParams>(fact).person_id);
      return {FactKind::ExplicitDateRange, fact.level,
              ExplicitDateRangeParams{ev.first_day(), ev.last_day()}};
    }
    case FactKind::USPresident: {
      const KBEvent& ev = kb.get(params_of<USPresidentParams>(fact).president_id);
      return {FactKind::ExplicitDateRange, fact.level,
              ExplicitDateRangeParams{ev.first_day(), ev.last_day()}};
    }
    case FactKind::Event: {
      const auto& years = params_of<EventParams>(fact).family == EventFamily::Olympics
                              ? kb.olympic_years()
                              : kb.worldcup_years();
      return {FactKind::ExplicitYearSet, fact.level, ExplicitYearSetParams{years}};
    }
    case FactKind::KnowledgeBaseEvent: {
      const auto& p = params_of<KnowledgeBaseEventParams>(fact);
      const KBEvent& ev = kb.get(p.event_id);
      switch (p.relation) {
        case KBRelation::SameDay: {
          Date d = ev.first_day();
          return {FactKind::ExplicitDateRange, fact.level, ExplicitDateRangeParams{d, d}};
        }
        case KBRelation::SameMonth: {
          Date first{ev.start.year, ev.start.month, 1};
          Date last{ev.start.year, ev.start.month,
                    days_in_month(ev.start.year, ev.start.month)};
          return {FactKind::ExplicitDateRange, fact.level,
                  ExplicitDateRangeParams{first, last}};
        }
        case KBRelation::SameYear:
          if (ev.start.year == ev.end.year) {
            return {FactKind::ExplicitYear, fact.level,
                    ExplicitYearParams{ev.start.year}};
          }
          return {FactKind::ExplicitYearRange, fact.level,
                  ExplicitYearRangeParams{ev.start.year, ev.end.year}};
        case KBRelation::WithinSpan:
          return {FactKind::ExplicitDateRange, fact.level,
                  ExplicitDateRangeParams{ev.first_day(), ev.last_day()}};
      }
      break;
    }
    default:
      break;
  }
  return fact;  // already self-contained
}

nlohmann::ordered_json fact_to_json(const Fact& fact) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(fact.kind);
  j["level"] = to_string(fact.level);
  switch (fact.kind) {
    case FactKind::ExplicitYear:
      j["year"] = params_of<ExplicitYearParams>(fact).year;
      break;
    case FactKind::Decade:
      j["decade"] = params_of<DecadeParams>(fact).decade;
      break;
    case FactKind::LeapYear:
      break;
    case FactKind::ChineseZodiac:
      j["animal"] = to_string(params_of<ChineseZodiacParams>(fact).animal);
      break;
    case FactKind::PersonAlive:
      j["person_id"] = params_of<PersonAliveParams>(fact).person_id;
      break;
    case FactKind::USPresident:
      j["president_id"] = params_of<USPresidentParams>(fact).president_id;
      break;
    case FactKind::Event:
      j["family"] = to_string(params_of<EventParams>(fact).family);
      break;
    case FactKind::Month:
      j["month"] = params_of<MonthParams>(fact).month;
      break;
    case FactKind::Season:
      j["season"] = to_string(params_of<SeasonParams>(fact).season);
      break;
    case FactKind::LunarMonth:
      j["month"] = params_of<LunarMonthParams>(fact).month;
      break;
    case FactKind::WeekdayInMonth: {
      const auto& p = params_of<WeekdayInMonthParams>(fact);
      j["n"] = p.n;
      j["weekday"] = to_string(p.weekday);
      break;
    }
    case FactKind::DayOfMonth: {
      const auto& p = params_of<DayOfMonthParams>(fact);
      j["spec"] = to_string(p.spec);
      if (p.spec == DayOfMonthSpec::Exact) j["day"] = p.day;
      break;
    }
    case FactKind::Weekday:
      j["weekday"] = to_string(params_of<WeekdayParams>(fact).weekday);
      break;
    case FactKind::MultiWeekday: {
      auto days = nlohmann::ordered_json::array();
      for (Weekday w : params_of<MultiWeekdayParams>(fact).weekdays) {
        days.push_back(to_string(w));
      }
      j["weekdays"] = std::move(days);
      break;
    }
    case FactKind::DayOfMonthRange: {
      const auto& p = params_of<DayOfMonthRangeParams>(fact);
      j["day"] = p.day;
      j["direction"] = to_string(p.direction);
      break;
    }
    case FactKind::KnowledgeBaseEvent: {
      const auto& p = params_of<KnowledgeBaseEventParams>(fact);
      j["event_id"] = p.event_id;
      j["relation"] = to_string(p.relation);
      break;
    }
    case FactKind::ExplicitYearRange: {
      const auto& p = params_of<ExplicitYearRangeParams>(fact);
      j["first_year"] = p.first_year;
      j["last_year"] = p.last_year;
      break;
    }
    case FactKind::ExplicitYearSet:
      j["years"] = params_of<ExplicitYearSetParams>(fact).years;
      break;
    case FactKind::ExplicitDateRange: {
      const auto& p = params_of<ExplicitDateRangeParams>(fact);
      j["first"] = to_string(p.first);
      j["last"] = to_string(p.last);
      break;
    }
    case FactKind::ExplicitDateRangeUnion: {
      auto ranges = nlohmann::ordered_json::array();
      for (const auto& [first, last] :
           params_of<ExplicitDateRangeUnionParams>(fact).ranges) {
        ranges.push_back({to_string(first), to_string(last)});
      }
      j["ranges"] = std::move(ranges);
      break;
    }
  }
  return j;
}

namespace {

int require_int(const nlohmann::json& j, const char* key, int lo, int hi) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw validation_error(std::string("fact field '") + key +
                           "' missing or not an integer");
  }
  int v = j[key].get<int>();
  if (v < lo || v > hi) {
    throw validation_error(std::string("fact field '") + key + "' out of range: " +
                           std::to_string(v));
  }
  return v;
}

std::string require_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw validation_error(std::string("fact field '") + key +
                           "' missing or not a string");
  }
  return j[key].get<std::string>();
}

}  // namespace

Fact fact_from_json(const nlohmann::json& j) {
  auto kind = fact_kind_from_string(require_string(j, "kind"));
  if (!kind) throw validation_error("unknown fact kind '" + require_string(j, "kind") + "'");
  auto level = level_from_string(require_string(j, "level"));
  if (!level) throw validation_error("unknown constraint level '" + require_string(j, "level") + "'");
  auto fixed = info_of(*kind).level;
  if (fixed && *fixed != *level) {
    throw validation_error(std::string("kind ") + to_string(*kind) +
                           " must be at level " + to_string(*fixed));
  }

  Fact fact{*kind, *level, LeapYearParams{}};
  switch (*kind) {
    case FactKind::ExplicitYear:
      fact.params = ExplicitYearParams{require_int(j, "year", 1, 9999)};
      break;
    case FactKind::Decade: {
      int dec = require_int(j, "decade", 0, 9990);
      if (dec % 10 != 0) throw validation_error("decade must be a multiple of 10");
      fact.params = DecadeParams{dec};
      break;
    }
    case FactKind::LeapYear:
      fact.params = LeapYearParams{};
      break;
    case FactKind::ChineseZodiac: {
      auto z = zodiac_from_string(require_string(j, "animal"));
      if (!z) throw validation_error("unknown zodiac animal");
      fact.params = ChineseZodiacParams{*z};
      break;
    }
    case FactKind::PersonAlive:
      fact.params = PersonAliveParams{require_string(j, "person_id")};
      break;
    case FactKind::USPresident:
      fact.params = USPresidentParams{require_string(j, "president_id")};
      break;
    case FactKind::Event: {
      std::string f = require_string(j, "family");
      if (f == "olympics") fact.params = EventParams{EventFamily::Olympics};
      else if (f == "world-cup") fact.params = EventParams{EventFamily::WorldCup};
      else throw validation_error("unknown event family '" + f + "'");
      break;
    }
    case FactKind::Month:
      fact.params = MonthParams{require_int(j, "month", 1, 12)};
      break;
    case FactKind::Season: {
      auto s = season_from_string(require_string(j, "season"));
      if (!s) throw validation_error("unknown season");
      fact.params = SeasonParams{*s};
      break;
    }
    case FactKind::LunarMonth:
      fact.params = LunarMonthParams{require_int(j, "month", 1, 12)};
      break;
    case FactKind::WeekdayInMonth: {
      auto w = weekday_from_string(require_string(j, "weekday"));
      if (!w) throw validation_error("unknown weekday");
      fact.params = WeekdayInMonthParams{require_int(j, "n", 1, 5), *w};
      break;
    }
    case FactKind::DayOfMonth: {
      std::string spec = require_string(j, "spec");
      if (spec == "exact") {
        fact.params = DayOfMonthParams{DayOfMonthSpec::Exact, require_int(j, "day", 1, 31)};
      } else if (spec == "first") {
        fact.params = DayOfMonthParams{DayOfMonthSpec::First, 0};
      } else if (spec == "last") {
        fact.params = DayOfMonthParams{DayOfMonthSpec::Last, 0};
      } else {
        throw validation_error("unknown day-of-month spec '" + spec + "'");
      }
      break;
    }
    case FactKind::Weekday: {
      auto w = weekday_from_string(require_string(j, "weekday"));
      if (!w) throw validation_error("unknown weekday");
      fact.params = WeekdayParams{*w};
      break;
    }
    case FactKind::MultiWeekday: {
      if (!j.contains("weekdays") || !j["weekdays"].is_array()) {
        throw validation_error("fact field 'weekdays' missing or not an array");
      }
      std::vector<Weekday> days;
      for (const auto& item : j["weekdays"]) {
        if (!item.is_string()) throw validation_error("weekday entries must be strings");
        auto w = weekday_from_string(item.get<std::string>());
        if (!w) throw validation_error("unknown weekday");
        days.push_back(*w);
      }
      if (days.size() < 2 || days.size() > 3 ||
          !std::is_sorted(days.begin(), days.end()) ||
          std::adjacent_find(days.begin(), days.end()) != days.end()) {
        throw validation_error("weekdays must be 2 or 3 distinct entries in order");
      }
      fact.params = MultiWeekdayParams{std::move(days)};
      break;
    }
    case FactKind::DayOfMonthRange: {
      std::string dir = require_string(j, "direction");
      int day = require_int(j, "day", 1, 31);
      if (dir == "before") fact.params = DayOfMonthRangeParams{day, RangeDirection::Before};
      else if (dir == "after") fact.params = DayOfMonthRangeParams{day, RangeDirection::After};
      else throw validation_error("unknown direction '" + dir + "'");
      break;
    }
    case FactKind::KnowledgeBaseEvent: {
      std::string rel = require_string(j, "relation");
      KBRelation r;
      if (rel == "same-day") r = KBRelation::SameDay;
      else if (rel == "same-month") r = KBRelation::SameMonth;
      else if (rel == "same-year") r = KBRelation::SameYear;
      else if (rel == "within-span") r = KBRelation::WithinSpan;
      else throw validation_error("unknown relation '" + rel + "'");
      if (*level != relation_level(r)) {
        throw validation_error("relation '" + rel + "' implies level " +
                               to_string(relation_level(r)));
      }
      fact.params = KnowledgeBaseEventParams{require_string(j, "event_id"), r};
      break;
    }
    case FactKind::ExplicitYearRange: {
      int a = require_int(j, "first_year", 1, 9999);
      int b = require_int(j, "last_year", 1, 9999);
      if (a > b) throw validation_error("first_year is after last_year");
      fact.params = ExplicitYearRangeParams{a, b};
      break;
    }
    case FactKind::ExplicitYearSet: {
      if (!j.contains("years") || !j["years"].is_array()) {
        throw validation_error("fact field 'years' missing or not an array");
      }
      std::vector<int> years;
      for (const auto& item : j["years"]) {
        if (!item.is_number_integer()) throw validation_error("years must be integers");
        years.push_back(item.get<int>());
      }
      if (years.empty() || !std::is_sorted(years.begin(), years.end()) ||
          std::adjacent_find(years.begin(), years.end()) != years.end()) {
        throw validation_error("years must be non-empty, ascending and distinct");
      }
      fact.params = ExplicitYearSetParams{std::move(years)};
      break;
    }
    case FactKind::ExplicitDateRange: {
      Date a = parse_date(require_string(j, "first"));
      Date b = parse_date(require_string(j, "last"));
      if (to_serial(a) > to_serial(b)) throw validation_error("range first is after last");
      fact.params = ExplicitDateRangeParams{a, b};
      break;
    }
    case FactKind::ExplicitDateRangeUnion: {
      if (!j.contains("ranges") || !j["ranges"].is_array()) {
        throw validation_error("fact field 'ranges' missing or not an array");
      }
      std::vector<std::pair<Date, Date>> ranges;
      int32_t prev_end = INT32_MIN;
      for (const auto& item : j["ranges"]) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_string() ||
            !item[1].is_string()) {
          throw validation_error("each range must be a [first, last] string pair");
        }
        Date a = parse_date(item[0].get<std::string>());
        Date b = parse_date(item[1].get<std::string>());
        if (to_serial(a) > to_serial(b)) throw validation_error("range first is after last");
        if (to_serial(a) <= prev_end) {
          throw validation_error("ranges must be sorted and disjoint");
        }
        prev_end = to_serial(b);
        ranges.emplace_back(a, b);
      }
      if (ranges.empty()) throw validation_error("ranges must be non-empty");
      fact.params = ExplicitDateRangeUnionParams{std::move(ranges)};
      break;
    }
  }
  return fact;
}

}  // namespace timepuzzles
