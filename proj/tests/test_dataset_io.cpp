#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "timepuzzles/dataset_io.hpp"
#include "timepuzzles/errors.hpp"
#include "timepuzzles/solver.hpp"
#include "timepuzzles/version.hpp"

using namespace timepuzzles;

namespace {

const KnowledgeBase& kb() { return KnowledgeBase::builtin(); }
const LunarTable& lunar() { return LunarTable::builtin(); }

std::vector<DatasetRecord> sample_records() {
  std::map<int, int> per_m{{1, 2}, {3, 1}};
  GenerationConfig cfg;
  cfg.rng_seed = 404;
  return records_from_pairs(generate_dataset(per_m, cfg, kb(), lunar()), kb());
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("puzzle id format") {
  CHECK(puzzle_id_for(3, 12, Variant::Implicit) == "m3-0012-implicit");
  CHECK(puzzle_id_for(1, 0, Variant::Explicit) == "m1-0000-explicit");
  CHECK(puzzle_id_for(6, 1234, Variant::Implicit) == "m6-1234-implicit");
}

TEST_CASE("records carry both variants in pair order") {
  auto records = sample_records();
  REQUIRE(records.size() == 6);
  CHECK(records[0].puzzle_id == "m1-0000-implicit");
  CHECK(records[1].puzzle_id == "m1-0000-explicit");
  CHECK(records[2].puzzle_id == "m1-0001-implicit");
  CHECK(records[4].puzzle_id == "m3-0000-implicit");
  for (const auto& r : records) {
    CHECK(r.generator_version == kGeneratorVersion);
    CHECK(r.rendered_constraints.size() == r.facts.size());
    CHECK(static_cast<int>(r.answers.size()) == r.target_m);
    CHECK(kb().has(r.anchor_id));
  }
  CHECK(records[0].answers == records[1].answers);
  CHECK(records[0].rng_seed == records[1].rng_seed);
}

TEST_CASE("record json round trip") {
  for (const auto& r : sample_records()) {
    nlohmann::ordered_json j = record_to_json(r);
    std::vector<std::string> warnings;
    DatasetRecord back = record_from_json(j, &warnings);
    CHECK(warnings.empty());
    CHECK(back.puzzle_id == r.puzzle_id);
    CHECK(back.variant == r.variant);
    CHECK(back.target_m == r.target_m);
    CHECK(back.rendered_constraints == r.rendered_constraints);
    CHECK(back.facts == r.facts);
    CHECK(back.answers == r.answers);
    CHECK(back.seed_date == r.seed_date);
    CHECK(back.anchor_id == r.anchor_id);
    CHECK(back.generator_version == r.generator_version);
    CHECK(back.rng_seed == r.rng_seed);
  }
}

TEST_CASE("record json key order is pinned") {
  auto records = sample_records();
  nlohmann::ordered_json j = record_to_json(records[0]);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{
                    "puzzle_id", "variant", "target_m", "rendered_constraints",
                    "facts", "answers", "seed_date", "anchor_id",
                    "generator_version", "rng_seed"});
}

TEST_CASE("file round trip is byte stable") {
  auto records = sample_records();
  auto p1 = temp_file("tp_ds_a.jsonl");
  auto p2 = temp_file("tp_ds_b.jsonl");
  write_dataset(records, p1.string());
  write_dataset(records, p2.string());
  std::string bytes = slurp(p1);
  CHECK(bytes == slurp(p2));
  CHECK(!bytes.empty());
  CHECK(bytes.back() == '\n');

  auto back = read_dataset(p1.string());
  REQUIRE(back.size() == records.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].puzzle_id == records[i].puzzle_id);
    CHECK(back[i].facts == records[i].facts);
    CHECK(back[i].answers == records[i].answers);
  }
  // Writing what was read reproduces the same bytes.
  auto p3 = temp_file("tp_ds_c.jsonl");
  write_dataset(back, p3.string());
  CHECK(slurp(p3) == bytes);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
  std::filesystem::remove(p3);
}

TEST_CASE("unknown dataset fields warn but do not fail") {
  auto records = sample_records();
  nlohmann::ordered_json j = record_to_json(records[0]);
  j["extra_field"] = 1;
  std::vector<std::string> warnings;
  DatasetRecord back = record_from_json(j, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("extra_field") != std::string::npos);
  CHECK(back.puzzle_id == records[0].puzzle_id);
}

TEST_CASE("malformed records are rejected with context") {
  auto records = sample_records();
  nlohmann::ordered_json j = record_to_json(records[0]);
  nlohmann::ordered_json missing = j;
  missing.erase("answers");
  CHECK_THROWS_AS(record_from_json(missing), validation_error);
  nlohmann::ordered_json wrong_type = j;
  wrong_type["target_m"] = "three";
  CHECK_THROWS_AS(record_from_json(wrong_type), validation_error);
  nlohmann::ordered_json bad_variant = j;
  bad_variant["variant"] = "mixed";
  CHECK_THROWS_AS(record_from_json(bad_variant), validation_error);
  nlohmann::ordered_json bad_date = j;
  bad_date["seed_date"] = "01/02/2020";
  CHECK_THROWS_AS(record_from_json(bad_date), validation_error);
}

TEST_CASE("reading reports the offending line") {
  auto p = temp_file("tp_ds_badline.jsonl");
  {
    auto records = sample_records();
    std::ofstream out(p);
    out << record_to_json(records[0]).dump() << "\n";
    out << "{not json}\n";
  }
  try {
    read_dataset(p.string());
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  std::filesystem::remove(p);
  CHECK_THROWS_AS(read_dataset("/nonexistent/nope.jsonl"), io_error);
}

TEST_CASE("dataset verification accepts generated data and rejects tampering") {
  auto records = sample_records();
  const DateUniverse& u = default_universe();
  CHECK_NOTHROW(verify_dataset(records, u, kb(), lunar()));

  SUBCASE("tampered answers") {
    auto bad = records;
    bad[0].answers[0] = "1905-05-05";
    try {
      verify_dataset(bad, u, kb(), lunar());
      FAIL("expected validation_error");
    } catch (const validation_error& e) {
      CHECK(std::string(e.what()).find(bad[0].puzzle_id) != std::string::npos);
    }
  }
  SUBCASE("tampered rendering") {
    auto bad = records;
    bad[0].rendered_constraints[0] = "The year is 1234.";
    CHECK_THROWS_AS(verify_dataset(bad, u, kb(), lunar()), validation_error);
  }
  SUBCASE("duplicate ids") {
    auto bad = records;
    bad[1].puzzle_id = bad[0].puzzle_id;
    CHECK_THROWS_AS(verify_dataset(bad, u, kb(), lunar()), validation_error);
  }
  SUBCASE("dropped answer") {
    auto bad = records;
    // Keep target_m in sync so only the re-solve check can catch it.
    for (auto& r : bad) {
      if (r.target_m >= 2) {
        r.answers.pop_back();
        r.target_m -= 1;
        break;
      }
    }
    CHECK_THROWS_AS(verify_dataset(bad, u, kb(), lunar()), validation_error);
  }
  SUBCASE("unknown anchor") {
    auto bad = records;
    bad[0].anchor_id = "missing_event";
    CHECK_THROWS_AS(verify_dataset(bad, u, kb(), lunar()), validation_error);
  }
}

TEST_CASE("gold instances mirror the records") {
  auto records = sample_records();
  auto gold = gold_from_records(records);
  REQUIRE(gold.size() == records.size());
  for (size_t i = 0; i < gold.size(); ++i) {
    CHECK(gold[i].puzzle_id == records[i].puzzle_id);
    CHECK(gold[i].variant == records[i].variant);
    CHECK(gold[i].target_m == records[i].target_m);
    CHECK(gold[i].answers.date_strings() == records[i].answers);
  }
}

TEST_CASE("prediction files round trip") {
  auto p = temp_file("tp_preds.jsonl");
  {
    std::ofstream out(p);
    append_prediction(out, {"m1-0000-implicit", "MY ANSWER: 2020-01-01", 17});
    append_prediction(out, {"m1-0000-explicit", "MY ANSWER: None", std::nullopt});
  }
  auto preds = read_predictions(p.string());
  REQUIRE(preds.size() == 2);
  CHECK(preds[0].puzzle_id == "m1-0000-implicit");
  CHECK(preds[0].raw_text == "MY ANSWER: 2020-01-01");
  REQUIRE(preds[0].output_tokens.has_value());
  CHECK(*preds[0].output_tokens == 17);
  CHECK(!preds[1].output_tokens.has_value());
  std::filesystem::remove(p);

  auto bad = temp_file("tp_preds_bad.jsonl");
  {
    std::ofstream out(bad);
    out << "{\"puzzle_id\": \"x\"}\n";  // raw_text missing
  }
  CHECK_THROWS_AS(read_predictions(bad.string()), validation_error);
  std::filesystem::remove(bad);
  CHECK_THROWS_AS(read_predictions("/nonexistent/preds.jsonl"), io_error);
}
