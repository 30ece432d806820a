#include "timepuzzles/generator.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "timepuzzles/errors.hpp"
#include "timepuzzles/solver.hpp"

namespace timepuzzles {

namespace {

constexpr FactKind kYearKinds[] = {
    FactKind::ExplicitYear, FactKind::Decade,      FactKind::LeapYear,
    FactKind::ChineseZodiac, FactKind::PersonAlive, FactKind::USPresident,
    FactKind::Event};
constexpr FactKind kMonthKinds[] = {FactKind::Month, FactKind::Season,
                                    FactKind::LunarMonth};
constexpr FactKind kDayKinds[] = {FactKind::WeekdayInMonth, FactKind::DayOfMonth,
                                  FactKind::Weekday, FactKind::MultiWeekday,
                                  FactKind::DayOfMonthRange};

int32_t sample_from_ranges(const RangeList& ranges, Rng& rng) {
  int64_t k = rng.uniform(0, ranges_size(ranges) - 1);
  for (const auto& [first, last] : ranges) {
    int64_t len = int64_t{last} - first + 1;
    if (k < len) return static_cast<int32_t>(first + k);
    k -= len;
  }
  return ranges.back().second;  // unreachable
}

}  // namespace

const char* to_string(Variant v) {
  return v == Variant::Implicit ? "implicit" : "explicit";
}

void GenerationConfig::validate() const {
  if (target_m < 1 || target_m > 6) {
    throw validation_error("target answer count must be between 1 and 6");
  }
  if (n_facts_min < 2 || n_facts_min > n_facts_max) {
    throw validation_error("fact count range must satisfy 2 <= min <= max");
  }
  if (max_attempts < 1) throw validation_error("max_attempts must be positive");
}

ConstraintLevel determine_level(int i, int n) {
  int slots = n - 1;
  if (slots <= 1) return ConstraintLevel::Day;
  if (slots == 2) return i == 1 ? ConstraintLevel::Month : ConstraintLevel::Day;
  switch ((i - 1) % 3) {
    case 0: return ConstraintLevel::Year;
    case 1: return ConstraintLevel::Month;
    default: return ConstraintLevel::Day;
  }
}

FactSet generate_fact_set(const Fact& anchor_fact, const Date& seed, int n,
                          Rng& rng, const KnowledgeBase& kb,
                          const LunarTable& lunar) {
  FactSet facts{anchor_fact};
  std::vector<FactKind> used{anchor_fact.kind};
  for (int i = 1; i <= n - 1; ++i) {
    ConstraintLevel level = determine_level(i, n);
    std::vector<FactKind> pool;
    auto add_fresh = [&](const auto& kinds) {
      for (FactKind k : kinds) {
        if (std::find(used.begin(), used.end(), k) == used.end()) pool.push_back(k);
      }
    };
    switch (level) {
      case ConstraintLevel::Year: add_fresh(kYearKinds); break;
      case ConstraintLevel::Month: add_fresh(kMonthKinds); break;
      case ConstraintLevel::Day: add_fresh(kDayKinds); break;
    }
    std::optional<Fact> fact;
    while (!pool.empty()) {
      std::size_t pick = rng.index(pool.size());
      try {
        fact = instantiate_fact(pool[pick], seed, rng, kb, lunar);
        break;
      } catch (const instantiation_error&) {
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      }
    }
    if (!fact) {
      throw instantiation_error(std::string("no unused ") + to_string(level) +
                                "-level kind instantiable on " + to_string(seed));
    }
    used.push_back(fact->kind);
    facts.push_back(std::move(*fact));
  }
  return facts;
}

Puzzle generate_puzzle(const GenerationConfig& cfg, const KnowledgeBase& kb,
                       const LunarTable& lunar) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  auto t0 = std::chrono::steady_clock::now();
  for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    const KBEvent& anchor = kb.sample_anchor(rng);
    Fact anchor_fact = make_anchor_fact(anchor, rng);
    RangeList anchor_ranges = constraint_ranges(anchor_fact, cfg.universe, kb, lunar);
    if (anchor_ranges.empty()) continue;  // anchor outside this universe
    Date seed = from_serial(sample_from_ranges(anchor_ranges, rng));
    int n = static_cast<int>(rng.uniform(cfg.n_facts_min, cfg.n_facts_max));

    FactSet facts;
    try {
      facts = generate_fact_set(anchor_fact, seed, n, rng, kb, lunar);
    } catch (const instantiation_error&) {
      continue;
    }
    DateSet answers = solve(facts, cfg.universe, kb, lunar);
    if (static_cast<int>(answers.size()) != cfg.target_m) continue;
    if (!(solve_naive(facts, cfg.universe, kb, lunar) == answers)) {
      throw validation_error("solver disagrees with the day-by-day scan");
    }

    Puzzle p;
    p.facts = std::move(facts);
    p.answers = std::move(answers);
    p.seed_date = seed;
    p.anchor_id = anchor.id;
    p.target_m = cfg.target_m;
    p.variant = Variant::Implicit;
    p.meta.rng_seed = cfg.rng_seed;
    p.meta.attempts = attempt;
    p.meta.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return p;
  }
  throw generation_error("no puzzle with " + std::to_string(cfg.target_m) +
                             " answers found in " + std::to_string(cfg.max_attempts) +
                             " attempts (seed " + std::to_string(cfg.rng_seed) + ")",
                         cfg.max_attempts);
}

Puzzle make_explicit_variant(const Puzzle& p, const GenerationConfig& cfg,
                             const KnowledgeBase& kb, const LunarTable& lunar) {
  Puzzle out = p;
  out.variant = Variant::Explicit;
  out.facts.clear();
  for (const Fact& f : p.facts) {
    out.facts.push_back(rewrite_explicit(f, kb, lunar));
  }
  out.answers = solve(out.facts, cfg.universe, kb, lunar);
  if (!(out.answers == p.answers)) {
    throw validation_error("explicit rewrite changed the answer set (anchor '" +
                           p.anchor_id + "')");
  }
  return out;
}

std::vector<PuzzlePair> generate_dataset(const std::map<int, int>& per_m,
                                         const GenerationConfig& cfg,
                                         const KnowledgeBase& kb,
                                         const LunarTable& lunar, int jobs) {
  cfg.validate();
  for (const auto& [m, count] : per_m) {
    if (m < 1 || m > 6) throw validation_error("answer counts must be between 1 and 6");
    if (count < 0) throw validation_error("puzzle counts must be non-negative");
  }
  if (jobs < 1) throw validation_error("jobs must be positive");

  std::vector<PuzzlePair> pairs;
  for (const auto& [m, count] : per_m) {
    for (int i = 0; i < count; ++i) {
      PuzzlePair pair;
      pair.target_m = m;
      pair.index = i;
      pair.puzzle_seed = Rng::mix(Rng::mix(cfg.rng_seed, static_cast<uint64_t>(m)),
                                  static_cast<uint64_t>(i));
      pairs.push_back(std::move(pair));
    }
  }

  auto work_one = [&](PuzzlePair& pair) {
    GenerationConfig local = cfg;
    local.target_m = pair.target_m;
    local.rng_seed = pair.puzzle_seed;
    pair.implicit_variant = generate_puzzle(local, kb, lunar);
    pair.explicit_variant = make_explicit_variant(pair.implicit_variant, local, kb, lunar);
  };

  if (jobs == 1 || pairs.size() < 2) {
    for (auto& pair : pairs) work_one(pair);
    return pairs;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(pairs.size());
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      try {
        work_one(pairs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < std::min<int>(jobs, static_cast<int>(pairs.size())); ++t) {
    threads.emplace_back(worker);
  }
  for (auto& t : threads) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return pairs;
}

}  // namespace timepuzzles
