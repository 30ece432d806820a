#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "timepuzzles/date.hpp"

namespace timepuzzles {

class Rng;

enum class Precision : int { Day = 0, Month, Year };

const char* to_string(Precision p);

// Date known only to some precision; month/day are 0 when unspecified.
struct PartialDate {
  int year = 0;
  int month = 0;
  int day = 0;

  bool operator==(const PartialDate&) const = default;

  Date first_day() const;  // earliest covered day
  Date last_day() const;   // latest covered day
  std::string to_string(Precision p) const;
};

struct KBEvent {
  std::string id;
  std::vector<std::string> tags;
  std::string description;
  PartialDate start;
  PartialDate end;
  Precision precision = Precision::Day;

  bool operator==(const KBEvent&) const = default;

  bool has_tag(std::string_view tag) const;
  bool is_point() const { return start == end; }
  Date first_day() const { return start.first_day(); }
  Date last_day() const { return end.last_day(); }
  bool spans_day(int32_t serial) const;
};

// Pipe-delimited event table: id | tags | description | start | end | precision.
class KnowledgeBase {
 public:
  static KnowledgeBase parse(std::string_view text);
  static KnowledgeBase load(const std::string& path);
  static const KnowledgeBase& builtin();

  std::string serialize() const;

  const std::vector<KBEvent>& events() const { return events_; }
  const KBEvent& get(std::string_view id) const;  // throws lookup_error
  bool has(std::string_view id) const;

  std::vector<const KBEvent*> with_tag(std::string_view tag) const;
  std::vector<const KBEvent*> anchors() const { return with_tag("anchor"); }
  std::vector<const KBEvent*> presidents() const { return with_tag("president"); }
  std::vector<const KBEvent*> lifespans() const { return with_tag("lifespan"); }

  // Years with a summer or winter Olympics / a World Cup, sorted ascending.
  const std::vector<int>& olympic_years() const { return olympic_years_; }
  const std::vector<int>& worldcup_years() const { return worldcup_years_; }

  const KBEvent& sample_anchor(Rng& rng) const;

  bool operator==(const KnowledgeBase& other) const { return events_ == other.events_; }

 private:
  std::vector<KBEvent> events_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<int> olympic_years_;
  std::vector<int> worldcup_years_;
};

}  // namespace timepuzzles
