#include "doctest.h"

#include <set>

#include "timepuzzles/errors.hpp"
#include "timepuzzles/knowledge_base.hpp"
#include "timepuzzles/rng.hpp"

using namespace timepuzzles;

TEST_CASE("builtin knowledge base shape") {
  const KnowledgeBase& kb = KnowledgeBase::builtin();
  CHECK(kb.anchors().size() >= 40);
  CHECK(kb.presidents().size() >= 10);
  CHECK(kb.lifespans().size() >= 5);
  CHECK(kb.olympic_years().size() >= 40);
  CHECK(kb.worldcup_years().size() >= 20);

  std::set<std::string> ids;
  for (const auto& ev : kb.events()) CHECK(ids.insert(ev.id).second);
}

TEST_CASE("every event lies inside the default universe") {
  const KnowledgeBase& kb = KnowledgeBase::builtin();
  for (const auto& ev : kb.events()) {
    CHECK(default_universe().contains(ev.first_day()));
    CHECK(default_universe().contains(ev.last_day()));
    CHECK(to_serial(ev.first_day()) <= to_serial(ev.last_day()));
  }
}

TEST_CASE("anchors end by 2023") {
  for (const KBEvent* ev : KnowledgeBase::builtin().anchors()) {
    CHECK(ev->last_day().year <= 2023);
  }
}

TEST_CASE("presidencies tile time") {
  auto prez = KnowledgeBase::builtin().presidents();
  REQUIRE(!prez.empty());
  std::sort(prez.begin(), prez.end(), [](const KBEvent* a, const KBEvent* b) {
    return a->first_day() < b->first_day();
  });
  for (std::size_t i = 1; i < prez.size(); ++i) {
    CHECK(to_serial(prez[i]->first_day()) ==
          to_serial(prez[i - 1]->last_day()) + 1);
  }
}

TEST_CASE("lookup by id") {
  const KnowledgeBase& kb = KnowledgeBase::builtin();
  const KBEvent& first = kb.events().front();
  CHECK(kb.get(first.id).id == first.id);
  CHECK(kb.has(first.id));
  CHECK(!kb.has("definitely_not_a_real_id"));
  CHECK_THROWS_AS(kb.get("definitely_not_a_real_id"), lookup_error);
}

TEST_CASE("serialize then parse is a fixpoint") {
  const KnowledgeBase& kb = KnowledgeBase::builtin();
  KnowledgeBase again = KnowledgeBase::parse(kb.serialize());
  CHECK(again == kb);
  CHECK(KnowledgeBase::parse(again.serialize()) == again);
}

TEST_CASE("partial dates expand by precision") {
  KnowledgeBase kb = KnowledgeBase::parse(
      "a | anchor,lesser-known | something happened | 1971 | 1971 | year\n"
      "b | anchor,lesser-known | a month-long thing | 1918-02 | 1920-04 | month\n"
      "c | anchor,lesser-known | an exact day event | 2001-03-15 | 2001-03-15 | day\n");
  CHECK(kb.get("a").first_day() == Date{1971, 1, 1});
  CHECK(kb.get("a").last_day() == Date{1971, 12, 31});
  CHECK(kb.get("a").is_point());
  CHECK(kb.get("b").first_day() == Date{1918, 2, 1});
  CHECK(kb.get("b").last_day() == Date{1920, 4, 30});
  CHECK(!kb.get("b").is_point());
  CHECK(kb.get("c").first_day() == Date{2001, 3, 15});
  CHECK(kb.get("c").spans_day(to_serial(Date{2001, 3, 15})));
  CHECK(!kb.get("c").spans_day(to_serial(Date{2001, 3, 16})));
}

TEST_CASE("partial date formatting matches precision") {
  PartialDate d{1918, 2, 0};
  CHECK(d.to_string(Precision::Month) == "1918-02");
  CHECK(PartialDate{1971, 0, 0}.to_string(Precision::Year) == "1971");
  CHECK(PartialDate{2001, 3, 15}.to_string(Precision::Day) == "2001-03-15");
}

TEST_CASE("parser rejects malformed tables") {
  // wrong field count
  CHECK_THROWS_AS(KnowledgeBase::parse("a | anchor | desc | 1971 | 1971\n"),
                  validation_error);
  // date does not match precision
  CHECK_THROWS_AS(
      KnowledgeBase::parse("a | anchor | desc | 1971-01-01 | 1971 | year\n"),
      validation_error);
  CHECK_THROWS_AS(
      KnowledgeBase::parse("a | anchor | desc | 1971-13 | 1971-13 | month\n"),
      validation_error);
  // unknown precision
  CHECK_THROWS_AS(
      KnowledgeBase::parse("a | anchor | desc | 1971 | 1971 | decade\n"),
      validation_error);
  // start after end
  CHECK_THROWS_AS(
      KnowledgeBase::parse("a | anchor | desc | 1972 | 1971 | year\n"),
      validation_error);
  // outside the default universe
  CHECK_THROWS_AS(
      KnowledgeBase::parse("a | lifespan | someone | 1879 | 1955 | year\n"),
      validation_error);
  CHECK_THROWS_AS(
      KnowledgeBase::parse("a | lifespan | someone | 2000 | 2031 | year\n"),
      validation_error);
  // anchor ending after 2023
  CHECK_THROWS_AS(
      KnowledgeBase::parse("a | anchor | desc | 2024-05-01 | 2024-05-01 | day\n"),
      validation_error);
  // duplicate ids
  CHECK_THROWS_AS(
      KnowledgeBase::parse("a | anchor | desc | 1971 | 1971 | year\n"
                           "a | anchor | desc | 1972 | 1972 | year\n"),
      validation_error);
  // overlapping presidencies
  CHECK_THROWS_AS(KnowledgeBase::parse(
                      "p1 | president | A | 2001-01-20 | 2009-01-19 | day\n"
                      "p2 | president | B | 2009-01-10 | 2017-01-19 | day\n"),
                  validation_error);
  CHECK_THROWS_AS(KnowledgeBase::parse(""), validation_error);
}

TEST_CASE("comments and blank lines are skipped") {
  KnowledgeBase kb = KnowledgeBase::parse(
      "# header\n"
      "\n"
      "a | anchor | desc | 1971 | 1971 | year\n");
  CHECK(kb.events().size() == 1);
}

TEST_CASE("anchor sampling is uniform-ish and deterministic") {
  const KnowledgeBase& kb = KnowledgeBase::builtin();
  Rng a(17), b(17);
  for (int i = 0; i < 50; ++i) {
    CHECK(kb.sample_anchor(a).id == kb.sample_anchor(b).id);
  }
  std::set<std::string> seen;
  Rng rng(23);
  for (int i = 0; i < 600; ++i) seen.insert(kb.sample_anchor(rng).id);
  CHECK(seen.size() > kb.anchors().size() / 2);
}
