#include "timepuzzles/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "timepuzzles/errors.hpp"

namespace timepuzzles {

namespace {

constexpr char kPromptTemplate[] =
    R"(From the time-related constraints below, determine all valid date(s) (if any) that satisfy them. Depending on the conditions, the result may be zero, one, or multiple dates. Unless otherwise stated, interpret all constraints using the Gregorian calendar.

Note: Seasons are defined as:
- Winter: December, January, February
- Spring: March, April, May
- Summer: June, July, August
- Autumn: September, October, November

The constraints are as follows:

{constraints}

Carefully review the constraints and reason step-by-step to identify all valid date(s). After thorough consideration, end your response on a new line with "MY ANSWER: " followed by the valid date(s) in the format "YYYY-MM-DD". If there are multiple valid dates, list them separated by commas. If no valid date exists, respond with "MY ANSWER: None".)";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view strip_trailing_punct(std::string_view s) {
  while (!s.empty()) {
    char c = s.back();
    if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?') {
      s.remove_suffix(1);
    } else {
      break;
    }
  }
  return trim_view(s);
}

void accumulate(MetricBlock& block, const InstanceScore& s) {
  block.count += 1;
  block.exact_match += s.exact_match;
  block.precision += s.precision;
  block.recall += s.recall;
  block.f1 += s.f1;
  block.jaccard += s.jaccard;
}

void finalize(MetricBlock& block) {
  if (block.count == 0) return;
  block.exact_match /= block.count;
  block.precision /= block.count;
  block.recall /= block.count;
  block.f1 /= block.count;
  block.jaccard /= block.count;
}

nlohmann::ordered_json block_to_json(const MetricBlock& b) {
  nlohmann::ordered_json j;
  j["count"] = b.count;
  j["exact_match"] = b.exact_match;
  j["precision"] = b.precision;
  j["recall"] = b.recall;
  j["f1"] = b.f1;
  j["jaccard"] = b.jaccard;
  return j;
}

}  // namespace

std::string build_prompt(const std::vector<std::string>& rendered_constraints) {
  if (rendered_constraints.empty()) {
    throw validation_error("cannot build a prompt from zero constraints");
  }
  std::ostringstream list;
  for (std::size_t i = 0; i < rendered_constraints.size(); ++i) {
    if (i) list << "\n";
    list << (i + 1) << ". " << rendered_constraints[i];
  }
  std::string prompt = kPromptTemplate;
  const std::string placeholder = "{constraints}";
  prompt.replace(prompt.find(placeholder), placeholder.size(), list.str());
  return prompt;
}

DateSet ParsedAnswer::as_set() const {
  if (status != ParseStatus::Dates) return DateSet{};
  return DateSet::from_dates(dates);
}

ParsedAnswer parse_answer(std::string_view raw_text) {
  ParsedAnswer out;
  const std::string haystack = lower(raw_text);
  const std::string needle = "my answer:";
  std::size_t pos = haystack.rfind(needle);
  if (pos == std::string::npos) {
    out.error = "no 'MY ANSWER:' line found";
    return out;
  }
  std::size_t begin = pos + needle.size();
  std::size_t end = raw_text.find('\n', begin);
  std::string_view rest = raw_text.substr(
      begin, end == std::string_view::npos ? std::string_view::npos : end - begin);
  rest = trim_view(rest);
  if (rest.empty()) {
    out.error = "answer line is empty";
    return out;
  }

  std::string_view whole = strip_trailing_punct(rest);
  if (lower(whole) == "none") {
    out.status = ParseStatus::NoneAnswer;
    return out;
  }

  std::vector<Date> dates;
  std::size_t start = 0;
  std::string rest_s(rest);
  while (start <= rest_s.size()) {
    std::size_t comma = rest_s.find(',', start);
    std::string_view token(rest_s.data() + start,
                           (comma == std::string::npos ? rest_s.size() : comma) - start);
    token = strip_trailing_punct(trim_view(token));
    auto d = try_parse_date(token);
    if (!d) {
      out.status = ParseStatus::Failure;
      out.error = "invalid token '" + std::string(token) + "'";
      out.dates.clear();
      return out;
    }
    dates.push_back(*d);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
  out.status = ParseStatus::Dates;
  out.dates = std::move(dates);
  return out;
}

InstanceScore score_sets(const DateSet& gold, const DateSet& predicted) {
  InstanceScore s;
  if (gold.empty() && predicted.empty()) {
    s.exact_match = s.precision = s.recall = s.f1 = s.jaccard = 1.0;
    return s;
  }
  if (gold.empty() || predicted.empty()) return s;  // all zero
  double inter = static_cast<double>(gold.intersect(predicted).size());
  double p = inter / static_cast<double>(predicted.size());
  double r = inter / static_cast<double>(gold.size());
  s.precision = p;
  s.recall = r;
  s.f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  double uni = static_cast<double>(gold.size() + predicted.size()) - inter;
  s.jaccard = inter / uni;
  s.exact_match = gold == predicted ? 1.0 : 0.0;
  return s;
}

std::optional<double> spearman(const std::vector<double>& a,
                               const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return std::nullopt;
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  std::vector<double> ra = ranks(a);
  std::vector<double> rb = ranks(b);
  double n = static_cast<double>(a.size());
  double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0 || vb == 0) return std::nullopt;
  return cov / std::sqrt(va * vb);
}

ScoreReport score_dataset(const std::vector<GoldInstance>& gold,
                          const std::vector<Prediction>& predictions) {
  std::map<std::string, const Prediction*> by_id;
  std::vector<std::string> problems;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.puzzle_id, &p).second) {
      problems.push_back("duplicate prediction for '" + p.puzzle_id + "'");
    }
  }
  std::set<std::string> gold_ids;
  for (const auto& g : gold) {
    if (!gold_ids.insert(g.puzzle_id).second) {
      problems.push_back("duplicate gold instance '" + g.puzzle_id + "'");
    }
    if (!by_id.count(g.puzzle_id)) {
      problems.push_back("missing prediction for '" + g.puzzle_id + "'");
    }
  }
  for (const auto& p : predictions) {
    if (!gold_ids.count(p.puzzle_id)) {
      problems.push_back("prediction for unknown puzzle '" + p.puzzle_id + "'");
    }
  }
  if (!problems.empty()) {
    std::string msg = "predictions do not align with the dataset:";
    for (std::size_t i = 0; i < problems.size() && i < 10; ++i) {
      msg += "\n  " + problems[i];
    }
    if (problems.size() > 10) {
      msg += "\n  ... and " + std::to_string(problems.size() - 10) + " more";
    }
    throw validation_error(msg);
  }
  if (gold.empty()) throw validation_error("nothing to score: dataset is empty");

  ScoreReport report;
  std::map<int, std::pair<double, int>> em_by_m;  // sum, count
  std::map<int, std::pair<double, int>> f1_by_m;
  double token_sum = 0;
  int token_count = 0;
  for (const auto& g : gold) {
    const Prediction& pred = *by_id.at(g.puzzle_id);
    ParsedAnswer parsed = parse_answer(pred.raw_text);
    if (parsed.status == ParseStatus::Failure) ++report.parse_failures;
    if (parsed.status == ParseStatus::NoneAnswer) ++report.none_answers;
    InstanceScore s = score_sets(g.answers, parsed.as_set());
    accumulate(report.overall, s);
    accumulate(report.by_target_m[g.target_m], s);
    accumulate(report.by_variant[g.variant], s);
    auto& em = em_by_m[g.target_m];
    em.first += s.exact_match;
    em.second += 1;
    auto& f1 = f1_by_m[g.target_m];
    f1.first += s.f1;
    f1.second += 1;
    if (pred.output_tokens) {
      token_sum += static_cast<double>(*pred.output_tokens);
      ++token_count;
    }
  }
  finalize(report.overall);
  for (auto& [m, block] : report.by_target_m) finalize(block);
  for (auto& [v, block] : report.by_variant) finalize(block);
  if (token_count > 0) report.mean_output_tokens = token_sum / token_count;

  std::vector<double> ms, em_means, f1_means;
  for (const auto& [m, sum_count] : em_by_m) {
    ms.push_back(static_cast<double>(m));
    em_means.push_back(sum_count.first / sum_count.second);
    f1_means.push_back(f1_by_m[m].first / f1_by_m[m].second);
  }
  report.spearman_m_vs_em = spearman(ms, em_means);
  report.spearman_m_vs_f1 = spearman(ms, f1_means);
  return report;
}

nlohmann::ordered_json ScoreReport::to_json() const {
  nlohmann::ordered_json j;
  j["overall"] = block_to_json(overall);
  auto by_m = nlohmann::ordered_json::object();
  for (const auto& [m, block] : by_target_m) {
    by_m[std::to_string(m)] = block_to_json(block);
  }
  j["by_target_m"] = std::move(by_m);
  auto by_v = nlohmann::ordered_json::object();
  for (const auto& [v, block] : by_variant) by_v[v] = block_to_json(block);
  j["by_variant"] = std::move(by_v);
  j["parse_failures"] = parse_failures;
  j["none_answers"] = none_answers;
  j["mean_output_tokens"] =
      mean_output_tokens ? nlohmann::ordered_json(*mean_output_tokens)
                         : nlohmann::ordered_json(nullptr);
  j["spearman_m_vs_em"] = spearman_m_vs_em
                              ? nlohmann::ordered_json(*spearman_m_vs_em)
                              : nlohmann::ordered_json(nullptr);
  j["spearman_m_vs_f1"] = spearman_m_vs_f1
                              ? nlohmann::ordered_json(*spearman_m_vs_f1)
                              : nlohmann::ordered_json(nullptr);
  return j;
}

std::string ScoreReport::to_table() const {
  std::ostringstream out;
  char line[160];
  auto row = [&](const std::string& label, const MetricBlock& b) {
    std::snprintf(line, sizeof(line),
                  "%-20s %6d %8.4f %8.4f %8.4f %8.4f %8.4f\n", label.c_str(),
                  b.count, b.exact_match, b.precision, b.recall, b.f1, b.jaccard);
    out << line;
  };
  std::snprintf(line, sizeof(line), "%-20s %6s %8s %8s %8s %8s %8s\n", "", "n",
                "EM", "P", "R", "F1", "JI");
  out << line;
  row("overall", overall);
  for (const auto& [m, block] : by_target_m) row("m=" + std::to_string(m), block);
  for (const auto& [v, block] : by_variant) row(v, block);
  out << "parse failures: " << parse_failures << ", none answers: " << none_answers
      << "\n";
  if (mean_output_tokens) {
    std::snprintf(line, sizeof(line), "mean output tokens: %.1f\n", *mean_output_tokens);
    out << line;
  }
  if (spearman_m_vs_em) {
    std::snprintf(line, sizeof(line), "spearman(m, EM): %.4f\n", *spearman_m_vs_em);
    out << line;
  }
  if (spearman_m_vs_f1) {
    std::snprintf(line, sizeof(line), "spearman(m, F1): %.4f\n", *spearman_m_vs_f1);
    out << line;
  }
  return out.str();
}

}  // namespace timepuzzles
