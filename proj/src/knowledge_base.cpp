#include "timepuzzles/knowledge_base.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "timepuzzles/errors.hpp"
#include "timepuzzles/knowledge_base_data.hpp"
#include "timepuzzles/rng.hpp"

namespace timepuzzles {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(trim(s.substr(pos)));
      return out;
    }
    out.push_back(trim(s.substr(pos, next - pos)));
    pos = next + 1;
  }
}

PartialDate parse_partial(const std::string& text, Precision p, int lineno) {
  auto fail = [&] {
    throw validation_error("knowledge base line " + std::to_string(lineno) +
                           ": date '" + text + "' does not match precision");
  };
  auto digits = [](std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
  };
  PartialDate d;
  switch (p) {
    case Precision::Year:
      if (text.size() != 4 || !digits(text)) fail();
      d.year = std::stoi(text);
      break;
    case Precision::Month: {
      if (text.size() != 7 || text[4] != '-' || !digits(text.substr(0, 4)) ||
          !digits(text.substr(5))) {
        fail();
      }
      d.year = std::stoi(text.substr(0, 4));
      d.month = std::stoi(text.substr(5));
      if (d.month < 1 || d.month > 12) fail();
      break;
    }
    case Precision::Day: {
      auto full = try_parse_date(text);
      if (!full) fail();
      d = PartialDate{full->year, full->month, full->day};
      break;
    }
  }
  return d;
}

}  // namespace

const char* to_string(Precision p) {
  switch (p) {
    case Precision::Day: return "day";
    case Precision::Month: return "month";
    case Precision::Year: return "year";
  }
  return "";
}

Date PartialDate::first_day() const {
  int m = month == 0 ? 1 : month;
  int d = day == 0 ? 1 : day;
  return Date{year, m, d};
}

Date PartialDate::last_day() const {
  int m = month == 0 ? 12 : month;
  int d = day == 0 ? days_in_month(year, m) : day;
  return Date{year, m, d};
}

std::string PartialDate::to_string(Precision p) const {
  char buf[16];
  switch (p) {
    case Precision::Year:
      std::snprintf(buf, sizeof(buf), "%04d", year);
      break;
    case Precision::Month:
      std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
      break;
    case Precision::Day:
      std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
      break;
  }
  return buf;
}

bool KBEvent::has_tag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

bool KBEvent::spans_day(int32_t serial) const {
  return serial >= to_serial(first_day()) && serial <= to_serial(last_day());
}

KnowledgeBase KnowledgeBase::parse(std::string_view text) {
  KnowledgeBase kb;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto fields = split(stripped, '|');
    if (fields.size() != 6) {
      throw validation_error("knowledge base line " + std::to_string(lineno) +
                             ": expected 6 pipe-separated fields");
    }
    KBEvent ev;
    ev.id = fields[0];
    ev.tags = split(fields[1], ',');
    ev.description = fields[2];
    if (fields[5] == "day") ev.precision = Precision::Day;
    else if (fields[5] == "month") ev.precision = Precision::Month;
    else if (fields[5] == "year") ev.precision = Precision::Year;
    else throw validation_error("knowledge base line " + std::to_string(lineno) +
                                ": unknown precision '" + fields[5] + "'");
    ev.start = parse_partial(fields[3], ev.precision, lineno);
    ev.end = parse_partial(fields[4], ev.precision, lineno);

    auto where = [&] { return "knowledge base event '" + ev.id + "'"; };
    if (ev.id.empty() || ev.tags.empty() || ev.description.empty()) {
      throw validation_error("knowledge base line " + std::to_string(lineno) +
                             ": empty id, tags or description");
    }
    Date first = ev.first_day();
    Date last = ev.last_day();
    if (!is_valid_date(first) || !is_valid_date(last)) {
      throw validation_error(where() + ": invalid date");
    }
    if (to_serial(first) > to_serial(last)) {
      throw validation_error(where() + ": starts after it ends");
    }
    if (!default_universe().contains(first) || !default_universe().contains(last)) {
      throw validation_error(where() + ": extends outside " +
                             to_string(default_universe().start()) + ".." +
                             to_string(default_universe().end()));
    }
    if (ev.has_tag("anchor") && last.year > 2023) {
      throw validation_error(where() + ": anchors must end by 2023");
    }
    if (!kb.by_id_.emplace(ev.id, kb.events_.size()).second) {
      throw validation_error(where() + ": duplicate id");
    }
    kb.events_.push_back(std::move(ev));
  }
  if (kb.events_.empty()) throw validation_error("knowledge base is empty");

  for (const auto& ev : kb.events_) {
    if (ev.has_tag("olympics-summer") || ev.has_tag("olympics-winter")) {
      kb.olympic_years_.push_back(ev.start.year);
    }
    if (ev.has_tag("world-cup")) kb.worldcup_years_.push_back(ev.start.year);
  }
  std::sort(kb.olympic_years_.begin(), kb.olympic_years_.end());
  kb.olympic_years_.erase(
      std::unique(kb.olympic_years_.begin(), kb.olympic_years_.end()),
      kb.olympic_years_.end());
  std::sort(kb.worldcup_years_.begin(), kb.worldcup_years_.end());

  // Presidencies must tile time with no gap or overlap so that the holder on
  // any covered day is unique.
  std::vector<const KBEvent*> prez = kb.presidents();
  std::sort(prez.begin(), prez.end(), [](const KBEvent* a, const KBEvent* b) {
    return to_serial(a->first_day()) < to_serial(b->first_day());
  });
  for (std::size_t i = 1; i < prez.size(); ++i) {
    if (to_serial(prez[i]->first_day()) != to_serial(prez[i - 1]->last_day()) + 1) {
      throw validation_error("presidency of '" + prez[i]->id +
                             "' does not start the day after '" +
                             prez[i - 1]->id + "' ends");
    }
  }
  return kb;
}

KnowledgeBase KnowledgeBase::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open knowledge base: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const KnowledgeBase& KnowledgeBase::builtin() {
  static const KnowledgeBase kb = parse(embedded::knowledge_base_text);
  return kb;
}

std::string KnowledgeBase::serialize() const {
  std::ostringstream out;
  for (const auto& ev : events_) {
    out << ev.id << " | ";
    for (std::size_t i = 0; i < ev.tags.size(); ++i) {
      if (i) out << ",";
      out << ev.tags[i];
    }
    out << " | " << ev.description << " | " << ev.start.to_string(ev.precision)
        << " | " << ev.end.to_string(ev.precision) << " | "
        << to_string(ev.precision) << "\n";
  }
  return out.str();
}

const KBEvent& KnowledgeBase::get(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) {
    throw lookup_error("no knowledge base event with id '" + std::string(id) + "'");
  }
  return events_[it->second];
}

bool KnowledgeBase::has(std::string_view id) const {
  return by_id_.count(std::string(id)) > 0;
}

std::vector<const KBEvent*> KnowledgeBase::with_tag(std::string_view tag) const {
  std::vector<const KBEvent*> out;
  for (const auto& ev : events_) {
    if (ev.has_tag(tag)) out.push_back(&ev);
  }
  return out;
}

const KBEvent& KnowledgeBase::sample_anchor(Rng& rng) const {
  auto pool = anchors();
  if (pool.empty()) throw validation_error("knowledge base has no anchor events");
  return *pool[rng.index(pool.size())];
}

}  // namespace timepuzzles
