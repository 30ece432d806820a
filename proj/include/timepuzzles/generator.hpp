#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "timepuzzles/date_set.hpp"
#include "timepuzzles/facts.hpp"
#include "timepuzzles/knowledge_base.hpp"
#include "timepuzzles/lunar.hpp"
#include "timepuzzles/rng.hpp"

namespace timepuzzles {

enum class Variant : int { Implicit = 0, Explicit };
const char* to_string(Variant v);

struct GenerationConfig {
  DateUniverse universe = default_universe();
  int n_facts_min = 4;  // total fact count drawn uniformly from this range
  int n_facts_max = 6;
  int target_m = 1;  // required answer set size, 1..6
  int max_attempts = 10000;
  uint64_t rng_seed = 0;

  void validate() const;  // throws validation_error
};

struct GenerationMeta {
  uint64_t rng_seed = 0;
  int attempts = 0;
  double elapsed_seconds = 0.0;
};

struct Puzzle {
  FactSet facts;
  DateSet answers;
  Date seed_date;
  std::string anchor_id;
  int target_m = 0;
  Variant variant = Variant::Implicit;
  GenerationMeta meta;
};

// Level schedule for the i-th generated fact (1-based) out of n-1 non-anchor
// slots: with one slot only Day is used; with two, Month then Day; from three
// on, Year -> Month -> Day cycling.
ConstraintLevel determine_level(int i, int n);

// One attempt: anchor fact plus n-1 instantiated facts with distinct kinds
// following the level schedule. Throws instantiation_error when a slot runs
// out of candidate kinds (caller restarts with a fresh anchor and seed).
FactSet generate_fact_set(const Fact& anchor_fact, const Date& seed, int n,
                          Rng& rng, const KnowledgeBase& kb,
                          const LunarTable& lunar);

// Rejection loop: sample anchor and seed, build a fact set, solve, accept
// when |answers| == target_m. Throws generation_error after max_attempts.
Puzzle generate_puzzle(const GenerationConfig& cfg, const KnowledgeBase& kb,
                       const LunarTable& lunar);

// Rewrites every fact of an accepted puzzle; answers are re-solved and must
// match the original ones.
Puzzle make_explicit_variant(const Puzzle& p, const GenerationConfig& cfg,
                             const KnowledgeBase& kb, const LunarTable& lunar);

struct PuzzlePair {
  int target_m = 0;
  int index = 0;  // 0-based within its target_m block
  uint64_t puzzle_seed = 0;
  Puzzle implicit_variant;
  Puzzle explicit_variant;
};

// Generates `per_m[m]` pairs for each m. Every pair gets its own seed derived
// from cfg.rng_seed, m and the index, so output is independent of `jobs`.
std::vector<PuzzlePair> generate_dataset(const std::map<int, int>& per_m,
                                         const GenerationConfig& cfg,
                                         const KnowledgeBase& kb,
                                         const LunarTable& lunar,
                                         int jobs = 1);

}  // namespace timepuzzles
