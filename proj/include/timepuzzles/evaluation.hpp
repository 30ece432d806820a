#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "timepuzzles/date.hpp"
#include "timepuzzles/date_set.hpp"

namespace timepuzzles {

// Fills the answer-format instructions and the numbered constraint list into
// the fixed prompt template.
std::string build_prompt(const std::vector<std::string>& rendered_constraints);

enum class ParseStatus : int {
  Dates = 0,        // one or more valid dates
  NoneAnswer,       // explicit "None"
  Failure,          // no answer line, or any malformed token
};

struct ParsedAnswer {
  ParseStatus status = ParseStatus::Failure;
  std::vector<Date> dates;  // sorted, deduplicated; empty unless status == Dates
  std::string error;        // set when status == Failure

  // None and Failure both evaluate as the empty set.
  DateSet as_set() const;
};

// Scans for the last "MY ANSWER:" line (case-insensitive) and parses the
// remainder of that line. A single malformed token fails the whole parse.
ParsedAnswer parse_answer(std::string_view raw_text);

struct InstanceScore {
  double exact_match = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double jaccard = 0.0;
};

// Set-overlap scores. Both sets empty scores 1 everywhere; exactly one empty
// scores 0 everywhere.
InstanceScore score_sets(const DateSet& gold, const DateSet& predicted);

struct Prediction {
  std::string puzzle_id;
  std::string raw_text;
  std::optional<int64_t> output_tokens;
};

struct GoldInstance {
  std::string puzzle_id;
  std::string variant;
  int target_m = 0;
  DateSet answers;
};

struct MetricBlock {
  int count = 0;
  double exact_match = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double jaccard = 0.0;
};

struct ScoreReport {
  MetricBlock overall;
  std::map<int, MetricBlock> by_target_m;
  std::map<std::string, MetricBlock> by_variant;
  int parse_failures = 0;
  int none_answers = 0;
  std::optional<double> mean_output_tokens;  // over predictions that carry counts
  // Spearman rank correlation of target_m against per-m mean scores; null
  // when fewer than two distinct m values are present.
  std::optional<double> spearman_m_vs_em;
  std::optional<double> spearman_m_vs_f1;

  nlohmann::ordered_json to_json() const;
  std::string to_table() const;
};

// Predictions must align 1:1 with gold instances by puzzle_id; missing or
// duplicate ids raise validation_error listing the offenders.
ScoreReport score_dataset(const std::vector<GoldInstance>& gold,
                          const std::vector<Prediction>& predictions);

// Tie-aware Spearman rank correlation; nullopt when either side has zero
// variance or sizes differ / are < 2.
std::optional<double> spearman(const std::vector<double>& a,
                               const std::vector<double>& b);

}  // namespace timepuzzles
