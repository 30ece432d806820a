#include "timepuzzles/dataset_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>

#include "timepuzzles/errors.hpp"
#include "timepuzzles/solver.hpp"
#include "timepuzzles/version.hpp"

namespace timepuzzles {

nlohmann::ordered_json record_to_json(const DatasetRecord& r) {
  nlohmann::ordered_json j;
  j["puzzle_id"] = r.puzzle_id;
  j["variant"] = r.variant;
  j["target_m"] = r.target_m;
  j["rendered_constraints"] = r.rendered_constraints;
  auto facts = nlohmann::ordered_json::array();
  for (const Fact& f : r.facts) facts.push_back(fact_to_json(f));
  j["facts"] = std::move(facts);
  j["answers"] = r.answers;
  j["seed_date"] = r.seed_date;
  j["anchor_id"] = r.anchor_id;
  j["generator_version"] = r.generator_version;
  j["rng_seed"] = r.rng_seed;
  return j;
}

DatasetRecord record_from_json(const nlohmann::json& j,
                               std::vector<std::string>* warnings) {
  static const std::set<std::string> known{
      "puzzle_id", "variant",   "target_m",          "rendered_constraints",
      "facts",     "answers",   "seed_date",         "anchor_id",
      "generator_version",      "rng_seed"};
  if (!j.is_object()) throw validation_error("dataset record is not a JSON object");
  if (warnings) {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) {
        warnings->push_back("ignoring unknown dataset field '" + key + "'");
      }
    }
  }
  auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw validation_error(std::string("dataset field '") + key +
                             "' missing or not a string");
    }
    return j[key].get<std::string>();
  };
  DatasetRecord r;
  r.puzzle_id = str("puzzle_id");
  r.variant = str("variant");
  if (r.variant != "implicit" && r.variant != "explicit") {
    throw validation_error("variant must be 'implicit' or 'explicit', got '" +
                           r.variant + "'");
  }
  if (!j.contains("target_m") || !j["target_m"].is_number_integer()) {
    throw validation_error("dataset field 'target_m' missing or not an integer");
  }
  r.target_m = j["target_m"].get<int>();
  auto string_list = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) {
      throw validation_error(std::string("dataset field '") + key +
                             "' missing or not an array");
    }
    std::vector<std::string> out;
    for (const auto& item : j[key]) {
      if (!item.is_string()) {
        throw validation_error(std::string("dataset field '") + key +
                               "' must contain strings");
      }
      out.push_back(item.get<std::string>());
    }
    return out;
  };
  r.rendered_constraints = string_list("rendered_constraints");
  if (!j.contains("facts") || !j["facts"].is_array()) {
    throw validation_error("dataset field 'facts' missing or not an array");
  }
  for (const auto& item : j["facts"]) r.facts.push_back(fact_from_json(item));
  r.answers = string_list("answers");
  for (const std::string& a : r.answers) parse_date(a);
  r.seed_date = str("seed_date");
  parse_date(r.seed_date);
  r.anchor_id = str("anchor_id");
  r.generator_version = str("generator_version");
  if (!j.contains("rng_seed") || !j["rng_seed"].is_number()) {
    throw validation_error("dataset field 'rng_seed' missing or not a number");
  }
  r.rng_seed = j["rng_seed"].get<uint64_t>();
  return r;
}

std::string puzzle_id_for(int target_m, int index, Variant v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "m%d-%04d-%s", target_m, index, to_string(v));
  return buf;
}

DatasetRecord make_record(const Puzzle& p, std::string puzzle_id,
                          const KnowledgeBase& kb) {
  DatasetRecord r;
  r.puzzle_id = std::move(puzzle_id);
  r.variant = to_string(p.variant);
  r.target_m = p.target_m;
  for (const Fact& f : p.facts) r.rendered_constraints.push_back(render(f, kb));
  r.facts = p.facts;
  r.answers = p.answers.date_strings();
  r.seed_date = to_string(p.seed_date);
  r.anchor_id = p.anchor_id;
  r.generator_version = kGeneratorVersion;
  r.rng_seed = p.meta.rng_seed;
  return r;
}

std::vector<DatasetRecord> records_from_pairs(const std::vector<PuzzlePair>& pairs,
                                              const KnowledgeBase& kb) {
  std::vector<DatasetRecord> out;
  out.reserve(pairs.size() * 2);
  for (const auto& pair : pairs) {
    out.push_back(make_record(pair.implicit_variant,
                              puzzle_id_for(pair.target_m, pair.index, Variant::Implicit),
                              kb));
    out.push_back(make_record(pair.explicit_variant,
                              puzzle_id_for(pair.target_m, pair.index, Variant::Explicit),
                              kb));
  }
  return out;
}

void write_dataset(const std::vector<DatasetRecord>& records,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  for (const auto& r : records) {
    out << record_to_json(r).dump() << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

std::vector<DatasetRecord> read_dataset(const std::string& path,
                                        std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open dataset: " + path);
  std::vector<DatasetRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw validation_error(path + ":" + std::to_string(lineno) +
                             ": not valid JSON: " + e.what());
    }
    try {
      out.push_back(record_from_json(j, warnings));
    } catch (const validation_error& e) {
      throw validation_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void verify_dataset(const std::vector<DatasetRecord>& records,
                    const DateUniverse& u, const KnowledgeBase& kb,
                    const LunarTable& lunar) {
  std::set<std::string> seen;
  for (const auto& r : records) {
    auto fail = [&](const std::string& why) {
      throw validation_error("puzzle '" + r.puzzle_id + "': " + why);
    };
    if (r.puzzle_id.empty()) throw validation_error("record with empty puzzle_id");
    if (!seen.insert(r.puzzle_id).second) fail("duplicate puzzle_id");
    if (r.facts.empty()) fail("no facts");
    if (r.facts.size() != r.rendered_constraints.size()) {
      fail("rendered constraint count does not match fact count");
    }
    for (std::size_t i = 0; i < r.facts.size(); ++i) {
      if (render(r.facts[i], kb) != r.rendered_constraints[i]) {
        fail("rendered constraint " + std::to_string(i + 1) +
             " does not match its fact");
      }
    }
    if (!kb.has(r.anchor_id)) fail("unknown anchor_id '" + r.anchor_id + "'");
    Date seed = parse_date(r.seed_date);
    for (const Fact& f : r.facts) {
      if (!holds(f, seed, kb, lunar)) {
        fail(std::string("seed date does not satisfy the ") + to_string(f.kind) +
             " fact");
      }
    }
    if (static_cast<int>(r.answers.size()) != r.target_m) {
      fail("answer count does not match target_m");
    }
    std::vector<Date> answers;
    for (const auto& text : r.answers) answers.push_back(parse_date(text));
    for (std::size_t i = 1; i < answers.size(); ++i) {
      if (!(answers[i - 1] < answers[i])) fail("answers not in ascending order");
    }
    for (const Date& a : answers) {
      if (!u.contains(a)) fail("answer " + to_string(a) + " outside the universe");
      for (const Fact& f : r.facts) {
        if (!holds(f, a, kb, lunar)) {
          fail("answer " + to_string(a) + " does not satisfy the " +
               std::string(to_string(f.kind)) + " fact");
        }
      }
    }
    DateSet solved = solve_naive(r.facts, u, kb, lunar);
    if (!(solved == DateSet::from_dates(answers))) {
      fail("stored answers do not equal a fresh day-by-day solve");
    }
  }
}

std::vector<GoldInstance> gold_from_records(const std::vector<DatasetRecord>& records) {
  std::vector<GoldInstance> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    GoldInstance g;
    g.puzzle_id = r.puzzle_id;
    g.variant = r.variant;
    g.target_m = r.target_m;
    std::vector<Date> answers;
    for (const auto& text : r.answers) answers.push_back(parse_date(text));
    g.answers = DateSet::from_dates(answers);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open predictions: " + path);
  std::vector<Prediction> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw validation_error(path + ":" + std::to_string(lineno) +
                             ": not valid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("puzzle_id") || !j["puzzle_id"].is_string() ||
        !j.contains("raw_text") || !j["raw_text"].is_string()) {
      throw validation_error(path + ":" + std::to_string(lineno) +
                             ": prediction needs string fields puzzle_id and raw_text");
    }
    Prediction p;
    p.puzzle_id = j["puzzle_id"].get<std::string>();
    p.raw_text = j["raw_text"].get<std::string>();
    if (j.contains("output_tokens") && !j["output_tokens"].is_null()) {
      if (!j["output_tokens"].is_number_integer()) {
        throw validation_error(path + ":" + std::to_string(lineno) +
                               ": output_tokens must be an integer");
      }
      p.output_tokens = j["output_tokens"].get<int64_t>();
    }
    out.push_back(std::move(p));
  }
  return out;
}

void append_prediction(std::ostream& out, const Prediction& p) {
  nlohmann::ordered_json j;
  j["puzzle_id"] = p.puzzle_id;
  j["raw_text"] = p.raw_text;
  if (p.output_tokens) j["output_tokens"] = *p.output_tokens;
  out << j.dump() << "\n";
}

}  // namespace timepuzzles
