#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "timepuzzles/dataset_io.hpp"
#include "timepuzzles/endpoint_runner.hpp"
#include "timepuzzles/errors.hpp"
#include "timepuzzles/evaluation.hpp"
#include "timepuzzles/generator.hpp"
#include "timepuzzles/solver.hpp"
#include "timepuzzles/version.hpp"

namespace tp = timepuzzles;

namespace {

struct CommonFlags {
  std::string universe_start = "1900-01-01";
  std::string universe_end = "2030-12-31";
  std::string kb_path;
  std::string lunar_path;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--start", flags.universe_start, "Universe start date (YYYY-MM-DD)");
  cmd->add_option("--end", flags.universe_end, "Universe end date (YYYY-MM-DD)");
  cmd->add_option("--kb", flags.kb_path, "Knowledge base file (default: built-in)");
  cmd->add_option("--lunar", flags.lunar_path, "Lunar calendar table (default: built-in)");
}

tp::DateUniverse universe_of(const CommonFlags& flags) {
  return tp::DateUniverse(tp::parse_date(flags.universe_start),
                          tp::parse_date(flags.universe_end));
}

const tp::KnowledgeBase& kb_of(const CommonFlags& flags, tp::KnowledgeBase& storage) {
  if (flags.kb_path.empty()) return tp::KnowledgeBase::builtin();
  storage = tp::KnowledgeBase::load(flags.kb_path);
  return storage;
}

const tp::LunarTable& lunar_of(const CommonFlags& flags, tp::LunarTable& storage) {
  if (flags.lunar_path.empty()) return tp::LunarTable::builtin();
  storage = tp::LunarTable::load(flags.lunar_path);
  return storage;
}

std::map<int, int> parse_per_m(const std::string& text) {
  std::map<int, int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t eq = item.find('=');
    int m = 0, count = 0;
    try {
      if (eq == std::string::npos) throw std::invalid_argument("no '='");
      m = std::stoi(item.substr(0, eq));
      count = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw tp::validation_error("--per-m entries look like M=COUNT, got '" + item + "'");
    }
    if (m < 1 || m > 6) {
      throw tp::validation_error("--per-m: answer count " + std::to_string(m) +
                                 " outside 1..6");
    }
    if (count < 0) throw tp::validation_error("--per-m: negative count");
    out[m] += count;
  }
  if (out.empty()) throw tp::validation_error("--per-m: no entries");
  return out;
}

int cmd_generate(const CommonFlags& common, const std::string& per_m_text,
                 uint64_t seed, const std::string& out_prefix, int n_min,
                 int n_max, int max_attempts, int jobs) {
  tp::KnowledgeBase kb_storage;
  tp::LunarTable lunar_storage;
  const tp::KnowledgeBase& kb = kb_of(common, kb_storage);
  const tp::LunarTable& lunar = lunar_of(common, lunar_storage);

  tp::GenerationConfig cfg;
  cfg.universe = universe_of(common);
  cfg.n_facts_min = n_min;
  cfg.n_facts_max = n_max;
  cfg.max_attempts = max_attempts;
  cfg.rng_seed = seed;

  auto per_m = parse_per_m(per_m_text);
  auto t0 = std::chrono::steady_clock::now();
  auto pairs = tp::generate_dataset(per_m, cfg, kb, lunar, jobs);
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  auto records = tp::records_from_pairs(pairs, kb);
  std::vector<tp::DatasetRecord> implicit_records, explicit_records;
  for (auto& r : records) {
    (r.variant == "implicit" ? implicit_records : explicit_records).push_back(r);
  }
  tp::write_dataset(implicit_records, out_prefix + ".implicit.jsonl");
  tp::write_dataset(explicit_records, out_prefix + ".explicit.jsonl");

  std::map<int, std::pair<int64_t, int>> attempts_by_m;  // total attempts, pairs
  for (const auto& pair : pairs) {
    auto& acc = attempts_by_m[pair.target_m];
    acc.first += pair.implicit_variant.meta.attempts;
    acc.second += 1;
  }
  for (const auto& [m, acc] : attempts_by_m) {
    std::printf("m=%d: %d puzzles, mean attempts %.1f\n", m, acc.second,
                static_cast<double>(acc.first) / acc.second);
  }
  std::printf("%zu pairs in %.2fs (%.3fs per puzzle)\n", pairs.size(), elapsed,
              pairs.empty() ? 0.0 : elapsed / static_cast<double>(pairs.size()));
  std::printf("wrote %s.implicit.jsonl and %s.explicit.jsonl\n",
              out_prefix.c_str(), out_prefix.c_str());
  return 0;
}

int cmd_solve(const CommonFlags& common, const std::string& dataset_path,
              const std::string& facts_path, bool naive, bool check) {
  tp::KnowledgeBase kb_storage;
  tp::LunarTable lunar_storage;
  const tp::KnowledgeBase& kb = kb_of(common, kb_storage);
  const tp::LunarTable& lunar = lunar_of(common, lunar_storage);
  tp::DateUniverse u = universe_of(common);

  if (dataset_path.empty() == facts_path.empty()) {
    throw tp::validation_error("pass exactly one of --dataset or --facts");
  }

  if (!facts_path.empty()) {
    std::ifstream in(facts_path);
    if (!in) throw tp::io_error("cannot open facts file: " + facts_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw tp::validation_error(facts_path + ": not valid JSON: " + e.what());
    }
    if (!j.is_array()) throw tp::validation_error("facts file must hold a JSON array");
    tp::FactSet facts;
    for (const auto& item : j) facts.push_back(tp::fact_from_json(item));
    tp::DateSet answers = naive ? tp::solve_naive(facts, u, kb, lunar)
                                : tp::solve(facts, u, kb, lunar);
    if (answers.empty()) {
      std::printf("0 solutions\n");
    } else {
      std::string joined;
      for (const auto& text : answers.date_strings()) {
        if (!joined.empty()) joined += ", ";
        joined += text;
      }
      std::printf("%zu solutions: %s\n", answers.size(), joined.c_str());
    }
    return 0;
  }

  std::vector<std::string> warnings;
  auto records = tp::read_dataset(dataset_path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  if (check) {
    tp::verify_dataset(records, u, kb, lunar);
    double t_fast = 0, t_naive = 0;
    int mismatches = 0;
    for (const auto& r : records) {
      auto t0 = std::chrono::steady_clock::now();
      tp::DateSet fast = tp::solve(r.facts, u, kb, lunar);
      auto t1 = std::chrono::steady_clock::now();
      tp::DateSet oracle = tp::solve_naive(r.facts, u, kb, lunar);
      auto t2 = std::chrono::steady_clock::now();
      t_fast += std::chrono::duration<double>(t1 - t0).count();
      t_naive += std::chrono::duration<double>(t2 - t1).count();
      if (!(fast == oracle)) {
        ++mismatches;
        std::printf("MISMATCH %s\n", r.puzzle_id.c_str());
      }
    }
    std::printf("%zu records checked, %d mismatches\n", records.size(), mismatches);
    std::printf("ig-sorted solve: %.3fs total, naive solve: %.3fs total\n", t_fast,
                t_naive);
    if (mismatches > 0) return 1;
    return 0;
  }

  for (const auto& r : records) {
    tp::DateSet answers = naive ? tp::solve_naive(r.facts, u, kb, lunar)
                                : tp::solve(r.facts, u, kb, lunar);
    std::string joined;
    for (const auto& text : answers.date_strings()) {
      if (!joined.empty()) joined += ", ";
      joined += text;
    }
    std::printf("%s\t%s\n", r.puzzle_id.c_str(), joined.c_str());
  }
  return 0;
}

int cmd_prompt(const std::string& dataset_path, const std::string& out_path) {
  auto records = tp::read_dataset(dataset_path);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw tp::io_error("cannot open for writing: " + out_path);
    out = &file;
  }
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["puzzle_id"] = r.puzzle_id;
    j["prompt"] = tp::build_prompt(r.rendered_constraints);
    (*out) << j.dump() << "\n";
  }
  return 0;
}

int cmd_score(const std::string& dataset_path, const std::string& predictions_path,
              const std::string& report_path, const std::string& series_path) {
  auto records = tp::read_dataset(dataset_path);
  auto gold = tp::gold_from_records(records);
  auto predictions = tp::read_predictions(predictions_path);
  tp::ScoreReport report = tp::score_dataset(gold, predictions);
  std::cout << report.to_table();
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw tp::io_error("cannot open for writing: " + report_path);
    out << report.to_json().dump(2) << "\n";
  }
  if (!series_path.empty()) {
    nlohmann::ordered_json series;
    auto ms = nlohmann::ordered_json::array();
    auto em = nlohmann::ordered_json::array();
    auto f1 = nlohmann::ordered_json::array();
    for (const auto& [m, block] : report.by_target_m) {
      ms.push_back(m);
      em.push_back(block.exact_match);
      f1.push_back(block.f1);
    }
    series["m"] = std::move(ms);
    series["exact_match"] = std::move(em);
    series["f1"] = std::move(f1);
    std::ofstream out(series_path, std::ios::binary);
    if (!out) throw tp::io_error("cannot open for writing: " + series_path);
    out << series.dump(2) << "\n";
  }
  return 0;
}

int cmd_run(const std::string& dataset_path, const tp::RunnerConfig& cfg,
            const std::string& out_path) {
  auto records = tp::read_dataset(dataset_path);
  std::vector<tp::PromptJob> jobs;
  jobs.reserve(records.size());
  for (const auto& r : records) {
    jobs.push_back({r.puzzle_id, tp::build_prompt(r.rendered_constraints)});
  }
  tp::RunnerStats stats = tp::run_endpoint(jobs, cfg, out_path);
  std::printf("requested %d, skipped %d, succeeded %d, failed %d\n", stats.requested,
              stats.skipped, stats.succeeded, stats.failed);
  return stats.failed > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Date-inference puzzle generator, solver and scorer"};
  app.set_version_flag("--version", tp::kGeneratorVersion);
  app.require_subcommand(1);

  CommonFlags gen_common;
  std::string per_m_text = "1=100,2=100,3=100,4=100,5=100,6=100";
  uint64_t seed = 0;
  std::string out_prefix = "dataset";
  int n_min = 4, n_max = 6, max_attempts = 10000, jobs = 1;
  auto* gen = app.add_subcommand("generate", "Generate a paired puzzle dataset");
  add_common(gen, gen_common);
  gen->add_option("--per-m", per_m_text, "Pairs per answer count, e.g. 1=100,2=50");
  gen->add_option("--seed", seed, "Root RNG seed");
  gen->add_option("--out", out_prefix, "Output prefix (writes PREFIX.implicit.jsonl, PREFIX.explicit.jsonl)");
  gen->add_option("--n-min", n_min, "Minimum facts per puzzle");
  gen->add_option("--n-max", n_max, "Maximum facts per puzzle");
  gen->add_option("--max-attempts", max_attempts, "Rejection-sampling cap per puzzle");
  gen->add_option("--jobs", jobs, "Parallel workers (output independent of this)");

  CommonFlags solve_common;
  std::string solve_dataset, solve_facts;
  bool naive = false, check = false;
  auto* solve = app.add_subcommand("solve", "Solve puzzles from a dataset or fact file");
  add_common(solve, solve_common);
  solve->add_option("--dataset", solve_dataset, "Dataset JSONL to solve");
  solve->add_option("--facts", solve_facts, "JSON file with one array of facts");
  solve->add_flag("--naive", naive, "Use the day-by-day reference solver");
  solve->add_flag("--check", check,
                  "Verify stored answers and compare both solvers");

  std::string prompt_dataset, prompt_out;
  auto* prompt = app.add_subcommand("prompt", "Emit one evaluation prompt per puzzle");
  prompt->add_option("--dataset", prompt_dataset, "Dataset JSONL")->required();
  prompt->add_option("--out", prompt_out, "Output JSONL (default: stdout)");

  std::string score_dataset_path, score_predictions, score_report, score_series;
  auto* score = app.add_subcommand("score", "Score model predictions against a dataset");
  score->add_option("--dataset", score_dataset_path, "Dataset JSONL")->required();
  score->add_option("--predictions", score_predictions, "Predictions JSONL")->required();
  score->add_option("--report", score_report, "Write the full report as JSON");
  score->add_option("--series", score_series, "Write per-M accuracy series as JSON");

  std::string run_dataset, run_out;
  tp::RunnerConfig runner;
  auto* run = app.add_subcommand("run", "Send prompts to a chat-completions endpoint");
  run->add_option("--dataset", run_dataset, "Dataset JSONL")->required();
  run->add_option("--endpoint", runner.base_url, "Base URL, e.g. http://localhost:8000")->required();
  run->add_option("--model", runner.model, "Model name for the request body")->required();
  run->add_option("--path", runner.path, "Request path");
  run->add_option("--out", run_out, "Predictions JSONL (appended, resumable)")->required();
  run->add_option("--concurrency", runner.concurrency, "Parallel requests");
  run->add_option("--timeout", runner.timeout_seconds, "Per-request timeout (seconds)");
  run->add_option("--max-retries", runner.max_retries, "Retries per prompt");
  run->add_option("--auth-env", runner.auth_env,
                  "Env var holding the bearer token (name only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      return cmd_generate(gen_common, per_m_text, seed, out_prefix, n_min, n_max,
                          max_attempts, jobs);
    }
    if (solve->parsed()) {
      return cmd_solve(solve_common, solve_dataset, solve_facts, naive, check);
    }
    if (prompt->parsed()) return cmd_prompt(prompt_dataset, prompt_out);
    if (score->parsed()) {
      return cmd_score(score_dataset_path, score_predictions, score_report,
                       score_series);
    }
    if (run->parsed()) return cmd_run(run_dataset, runner, run_out);
  } catch (const tp::generation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tp::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
