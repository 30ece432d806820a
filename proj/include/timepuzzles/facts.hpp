#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "timepuzzles/date.hpp"
#include "timepuzzles/knowledge_base.hpp"
#include "timepuzzles/lunar.hpp"

namespace timepuzzles {

class Rng;
class LunarTable;

enum class ConstraintLevel : int { Year = 0, Month, Day };

const char* to_string(ConstraintLevel level);
std::optional<ConstraintLevel> level_from_string(std::string_view name);

enum class FactKind : int {
  // Year level
  ExplicitYear = 0,
  Decade,
  LeapYear,
  ChineseZodiac,
  PersonAlive,
  USPresident,
  Event,
  // Month level
  Month,
  Season,
  LunarMonth,
  // Day level
  WeekdayInMonth,
  DayOfMonth,
  Weekday,
  MultiWeekday,
  DayOfMonthRange,
  // Anchor fact; level depends on the sampled relation
  KnowledgeBaseEvent,
  // Rewrite targets only; never produced by instantiation
  ExplicitYearRange,
  ExplicitYearSet,
  ExplicitDateRange,
  ExplicitDateRangeUnion,
};

const char* to_string(FactKind kind);
std::optional<FactKind> fact_kind_from_string(std::string_view name);

// True for the sixteen kinds the generator can instantiate directly.
bool is_implicit_kind(FactKind kind);

enum class EventFamily : int { Olympics = 0, WorldCup };
enum class DayOfMonthSpec : int { Exact = 0, First, Last };
enum class RangeDirection : int { Before = 0, After };
enum class KBRelation : int { SameDay = 0, SameMonth, SameYear, WithinSpan };

const char* to_string(EventFamily f);
const char* to_string(DayOfMonthSpec s);
const char* to_string(RangeDirection d);
const char* to_string(KBRelation r);

struct ExplicitYearParams {
  int year;
  bool operator==(const ExplicitYearParams&) const = default;
};
struct DecadeParams {
  int decade;  // first year, e.g. 1990
  bool operator==(const DecadeParams&) const = default;
};
struct LeapYearParams {
  bool operator==(const LeapYearParams&) const = default;
};
struct ChineseZodiacParams {
  Zodiac animal;
  bool operator==(const ChineseZodiacParams&) const = default;
};
struct PersonAliveParams {
  std::string person_id;
  bool operator==(const PersonAliveParams&) const = default;
};
struct USPresidentParams {
  std::string president_id;
  bool operator==(const USPresidentParams&) const = default;
};
struct EventParams {
  EventFamily family;
  bool operator==(const EventParams&) const = default;
};
struct MonthParams {
  int month;
  bool operator==(const MonthParams&) const = default;
};
struct SeasonParams {
  Season season;
  bool operator==(const SeasonParams&) const = default;
};
struct LunarMonthParams {
  int month;  // 1..12, leap occurrences count as the same month
  bool operator==(const LunarMonthParams&) const = default;
};
struct WeekdayInMonthParams {
  int n;  // 1..5
  Weekday weekday;
  bool operator==(const WeekdayInMonthParams&) const = default;
};
struct DayOfMonthParams {
  DayOfMonthSpec spec;
  int day;  // meaningful for Exact only
  bool operator==(const DayOfMonthParams&) const = default;
};
struct WeekdayParams {
  Weekday weekday;
  bool operator==(const WeekdayParams&) const = default;
};
struct MultiWeekdayParams {
  std::vector<Weekday> weekdays;  // sorted, 2 or 3 distinct entries
  bool operator==(const MultiWeekdayParams&) const = default;
};
struct DayOfMonthRangeParams {
  int day;  // strict bound, excluded
  RangeDirection direction;
  bool operator==(const DayOfMonthRangeParams&) const = default;
};
struct KnowledgeBaseEventParams {
  std::string event_id;
  KBRelation relation;
  bool operator==(const KnowledgeBaseEventParams&) const = default;
};
struct ExplicitYearRangeParams {
  int first_year;
  int last_year;  // inclusive
  bool operator==(const ExplicitYearRangeParams&) const = default;
};
struct ExplicitYearSetParams {
  std::vector<int> years;  // sorted ascending
  bool operator==(const ExplicitYearSetParams&) const = default;
};
struct ExplicitDateRangeParams {
  Date first;
  Date last;  // inclusive
  bool operator==(const ExplicitDateRangeParams&) const = default;
};
struct ExplicitDateRangeUnionParams {
  std::vector<std::pair<Date, Date>> ranges;  // inclusive, sorted, disjoint
  bool operator==(const ExplicitDateRangeUnionParams&) const = default;
};

using FactParams = std::variant<
    ExplicitYearParams, DecadeParams, LeapYearParams, ChineseZodiacParams,
    PersonAliveParams, USPresidentParams, EventParams, MonthParams,
    SeasonParams, LunarMonthParams, WeekdayInMonthParams, DayOfMonthParams,
    WeekdayParams, MultiWeekdayParams, DayOfMonthRangeParams,
    KnowledgeBaseEventParams, ExplicitYearRangeParams, ExplicitYearSetParams,
    ExplicitDateRangeParams, ExplicitDateRangeUnionParams>;

struct Fact {
  FactKind kind;
  ConstraintLevel level;
  FactParams params;

  bool operator==(const Fact&) const = default;
};

using FactSet = std::vector<Fact>;

// Sorted, disjoint, inclusive serial ranges.
using RangeList = std::vector<std::pair<int32_t, int32_t>>;

// Sorts, merges overlapping/adjacent ranges, clips to the universe.
RangeList normalize_ranges(RangeList ranges, const DateUniverse& u);
int64_t ranges_size(const RangeList& ranges);
bool ranges_contain(const RangeList& ranges, int32_t serial);

// Does the fact hold on the given date? `d` and `serial` must agree.
bool holds(const Fact& fact, const Date& d, int32_t serial,
           const KnowledgeBase& kb, const LunarTable& lunar);
bool holds(const Fact& fact, const Date& d, const KnowledgeBase& kb,
           const LunarTable& lunar);

// Exact constraint set as ranges, clipped to the universe. Never enumerates
// the universe day by day.
RangeList constraint_ranges(const Fact& fact, const DateUniverse& u,
                            const KnowledgeBase& kb, const LunarTable& lunar);
int64_t constraint_cardinality(const Fact& fact, const DateUniverse& u,
                               const KnowledgeBase& kb, const LunarTable& lunar);

// IG(t) = log2 |universe| - log2 |C(t)|. Throws validation_error when the
// constraint set is empty (the gain is undefined).
double information_gain(const Fact& fact, const DateUniverse& u,
                        const KnowledgeBase& kb, const LunarTable& lunar);

// Builds a fact of the given kind that holds on `seed`. Throws
// instantiation_error when the kind cannot produce one (person dead, seed
// outside lunar coverage, no event that year, ...).
Fact instantiate_fact(FactKind kind, const Date& seed, Rng& rng,
                      const KnowledgeBase& kb, const LunarTable& lunar);

// Relations an event supports, given its precision and extent.
std::vector<KBRelation> eligible_relations(const KBEvent& ev);
ConstraintLevel relation_level(KBRelation r);

// Anchor fact for a pre-sampled event; relation picked uniformly among the
// eligible ones. The seed date is sampled from this fact's constraint set
// afterwards, so it holds by construction.
Fact make_anchor_fact(const KBEvent& ev, Rng& rng);

// Natural-language rendering ("The year is 2025.").
std::string render(const Fact& fact, const KnowledgeBase& kb);

// Semantics-preserving rewrite to self-contained kinds. Facts whose surface
// form is already self-contained come back unchanged; identity is preserved
// over any universe, not just the default one.
Fact rewrite_explicit(const Fact& fact, const KnowledgeBase& kb,
                      const LunarTable& lunar);

nlohmann::ordered_json fact_to_json(const Fact& fact);
Fact fact_from_json(const nlohmann::json& j);

}  // namespace timepuzzles
