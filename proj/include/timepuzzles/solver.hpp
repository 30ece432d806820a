#pragma once

#include "timepuzzles/date_set.hpp"
#include "timepuzzles/facts.hpp"
#include "timepuzzles/knowledge_base.hpp"
#include "timepuzzles/lunar.hpp"

namespace timepuzzles {

// Intersects the constraint sets of all facts over the universe, applying
// facts in descending information gain (empty constraint sets first; ties
// keep input order). Only the first constraint set is materialized; the rest
// filter the running set by membership.
DateSet solve(const FactSet& facts, const DateUniverse& u,
              const KnowledgeBase& kb, const LunarTable& lunar);

// Reference implementation: scans every day of the universe and keeps those
// satisfying all facts. Slow but obviously correct.
DateSet solve_naive(const FactSet& facts, const DateUniverse& u,
                    const KnowledgeBase& kb, const LunarTable& lunar);

}  // namespace timepuzzles
