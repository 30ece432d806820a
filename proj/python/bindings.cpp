#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "timepuzzles/dataset_io.hpp"
#include "timepuzzles/errors.hpp"
#include "timepuzzles/evaluation.hpp"
#include "timepuzzles/generator.hpp"
#include "timepuzzles/solver.hpp"
#include "timepuzzles/version.hpp"

namespace py = pybind11;
using namespace timepuzzles;

namespace {

DateUniverse make_universe(const std::string& start, const std::string& end) {
  return DateUniverse(parse_date(start), parse_date(end));
}

std::vector<std::string> py_generate(const std::map<int, int>& per_m,
                                     uint64_t seed, int jobs, int n_facts_min,
                                     int n_facts_max, int max_attempts,
                                     const std::string& start,
                                     const std::string& end) {
  GenerationConfig cfg;
  cfg.universe = make_universe(start, end);
  cfg.rng_seed = seed;
  cfg.n_facts_min = n_facts_min;
  cfg.n_facts_max = n_facts_max;
  cfg.max_attempts = max_attempts;
  cfg.validate();
  auto pairs = generate_dataset(per_m, cfg, KnowledgeBase::builtin(),
                                LunarTable::builtin(), jobs);
  std::vector<std::string> lines;
  for (const auto& r : records_from_pairs(pairs, KnowledgeBase::builtin())) {
    lines.push_back(record_to_json(r).dump());
  }
  return lines;
}

std::vector<std::string> py_solve(const std::string& facts_json, bool naive,
                                  const std::string& start,
                                  const std::string& end) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(facts_json);
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("facts_json is not valid JSON: ") + e.what());
  }
  if (!parsed.is_array()) throw validation_error("facts_json must be a JSON array");
  FactSet facts;
  for (const auto& item : parsed) facts.push_back(fact_from_json(item));
  DateUniverse u = make_universe(start, end);
  const auto& kb = KnowledgeBase::builtin();
  const auto& lunar = LunarTable::builtin();
  DateSet result = naive ? solve_naive(facts, u, kb, lunar) : solve(facts, u, kb, lunar);
  return result.date_strings();
}

py::dict py_parse_answer(const std::string& raw_text) {
  ParsedAnswer a = parse_answer(raw_text);
  py::dict out;
  switch (a.status) {
    case ParseStatus::Dates: out["status"] = "dates"; break;
    case ParseStatus::NoneAnswer: out["status"] = "none"; break;
    case ParseStatus::Failure: out["status"] = "failure"; break;
  }
  py::list dates;
  for (const Date& d : a.dates) dates.append(to_string(d));
  out["dates"] = dates;
  out["error"] = a.error;
  return out;
}

std::string py_score(const std::vector<std::string>& dataset_lines,
                     const std::vector<std::string>& prediction_lines) {
  std::vector<DatasetRecord> records;
  for (size_t i = 0; i < dataset_lines.size(); ++i) {
    try {
      records.push_back(record_from_json(nlohmann::json::parse(dataset_lines[i])));
    } catch (const nlohmann::json::exception& e) {
      throw validation_error("dataset line " + std::to_string(i + 1) +
                             " is not valid JSON: " + e.what());
    }
  }
  std::vector<Prediction> preds;
  for (size_t i = 0; i < prediction_lines.size(); ++i) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(prediction_lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw validation_error("prediction line " + std::to_string(i + 1) +
                             " is not valid JSON: " + e.what());
    }
    if (!j.contains("puzzle_id") || !j["puzzle_id"].is_string() ||
        !j.contains("raw_text") || !j["raw_text"].is_string()) {
      throw validation_error("prediction line " + std::to_string(i + 1) +
                             " needs string fields 'puzzle_id' and 'raw_text'");
    }
    Prediction p{j["puzzle_id"].get<std::string>(), j["raw_text"].get<std::string>(),
                 std::nullopt};
    if (j.contains("output_tokens") && j["output_tokens"].is_number()) {
      p.output_tokens = j["output_tokens"].get<int64_t>();
    }
    preds.push_back(std::move(p));
  }
  return score_dataset(gold_from_records(records), preds).to_json().dump();
}

std::string py_render_fact(const std::string& fact_json) {
  return render(fact_from_json(nlohmann::json::parse(fact_json)),
                KnowledgeBase::builtin());
}

std::string py_rewrite_explicit(const std::string& fact_json) {
  Fact f = fact_from_json(nlohmann::json::parse(fact_json));
  return fact_to_json(rewrite_explicit(f, KnowledgeBase::builtin(),
                                       LunarTable::builtin()))
      .dump();
}

}  // namespace

PYBIND11_MODULE(_timepuzzles, m) {
  m.doc() = "Date-inference puzzle generator, solver and scorer";

  py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<io_error>(m, "IOError", PyExc_OSError);
  py::register_exception<generation_error>(m, "GenerationError", PyExc_RuntimeError);

  m.def("version", [] { return std::string(kGeneratorVersion); },
        "Generator version string.");

  m.def("generate", &py_generate, py::arg("per_m"), py::arg("seed") = 0,
        py::arg("jobs") = 1, py::arg("n_facts_min") = 4,
        py::arg("n_facts_max") = 6, py::arg("max_attempts") = 10000,
        py::arg("start") = "1900-01-01", py::arg("end") = "2030-12-31",
        py::call_guard<py::gil_scoped_release>(),
        "Generate per_m[m] puzzle pairs per answer-set size m. Returns one "
        "dataset-record JSON string per variant (implicit and explicit, "
        "pair by pair).");

  m.def("solve_facts", &py_solve, py::arg("facts_json"), py::arg("naive") = false,
        py::arg("start") = "1900-01-01", py::arg("end") = "2030-12-31",
        py::call_guard<py::gil_scoped_release>(),
        "Solve a JSON array of fact objects; returns the matching dates "
        "in ascending order as YYYY-MM-DD strings.");

  m.def("build_prompt",
        [](const std::vector<std::string>& constraints) {
          return build_prompt(constraints);
        },
        py::arg("constraints"),
        "Fill the numbered constraint list into the fixed prompt template.");

  m.def("parse_answer", &py_parse_answer, py::arg("raw_text"),
        "Parse a model response. Returns {'status': 'dates'|'none'|'failure', "
        "'dates': [...], 'error': str}.");

  m.def("score", &py_score, py::arg("dataset_lines"), py::arg("prediction_lines"),
        "Score prediction JSONL lines against dataset-record JSONL lines; "
        "returns the metrics report as a JSON string.");

  m.def("render_fact", &py_render_fact, py::arg("fact_json"),
        "Natural-language rendering of a single fact object.");

  m.def("rewrite_explicit", &py_rewrite_explicit, py::arg("fact_json"),
        "Rewrite a fact to a self-contained form; returns the fact as JSON.");
}
