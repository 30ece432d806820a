#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "timepuzzles/evaluation.hpp"
#include "timepuzzles/facts.hpp"
#include "timepuzzles/generator.hpp"

namespace timepuzzles {

struct DatasetRecord {
  std::string puzzle_id;
  std::string variant;  // "implicit" | "explicit"
  int target_m = 0;
  std::vector<std::string> rendered_constraints;
  FactSet facts;
  std::vector<std::string> answers;  // YYYY-MM-DD, ascending
  std::string seed_date;
  std::string anchor_id;
  std::string generator_version;
  uint64_t rng_seed = 0;
};

nlohmann::ordered_json record_to_json(const DatasetRecord& r);
// Throws validation_error on missing/ill-typed fields; unknown keys are
// collected into `warnings` (one line each) and otherwise ignored.
DatasetRecord record_from_json(const nlohmann::json& j,
                               std::vector<std::string>* warnings = nullptr);

DatasetRecord make_record(const Puzzle& p, std::string puzzle_id,
                          const KnowledgeBase& kb);

// puzzle ids look like m3-0012-implicit / m3-0012-explicit.
std::string puzzle_id_for(int target_m, int index, Variant v);

std::vector<DatasetRecord> records_from_pairs(const std::vector<PuzzlePair>& pairs,
                                              const KnowledgeBase& kb);

void write_dataset(const std::vector<DatasetRecord>& records,
                   const std::string& path);
std::vector<DatasetRecord> read_dataset(const std::string& path,
                                        std::vector<std::string>* warnings = nullptr);

// Re-checks stored invariants: facts hold on every answer, answers equal a
// fresh solve, rendered constraints match render(fact), id/variant/version
// fields are consistent. Throws validation_error naming the first offender.
void verify_dataset(const std::vector<DatasetRecord>& records,
                    const DateUniverse& u, const KnowledgeBase& kb,
                    const LunarTable& lunar);

std::vector<GoldInstance> gold_from_records(const std::vector<DatasetRecord>& records);

// Prediction files are JSONL: {"puzzle_id": ..., "raw_text": ..., "output_tokens"?: ...}.
std::vector<Prediction> read_predictions(const std::string& path);
void append_prediction(std::ostream& out, const Prediction& p);

}  // namespace timepuzzles
