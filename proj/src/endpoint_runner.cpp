#include "timepuzzles/endpoint_runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "timepuzzles/dataset_io.hpp"
#include "timepuzzles/errors.hpp"

namespace timepuzzles {

namespace {

// Ids already answered in a previous (possibly interrupted) run. A torn final
// line from a crash is skipped, not fatal.
std::set<std::string> existing_ids(const std::string& path) {
  std::set<std::string> ids;
  std::ifstream in(path, std::ios::binary);
  if (!in) return ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("puzzle_id") ||
        !j["puzzle_id"].is_string()) {
      std::cerr << "warning: skipping malformed line in " << path << "\n";
      continue;
    }
    ids.insert(j["puzzle_id"].get<std::string>());
  }
  return ids;
}

}  // namespace

RunnerStats run_endpoint(const std::vector<PromptJob>& jobs,
                         const RunnerConfig& cfg, const std::string& out_path) {
  if (cfg.base_url.empty()) throw validation_error("endpoint base url is empty");
  if (cfg.concurrency < 1) throw validation_error("concurrency must be positive");

  std::string token;
  if (!cfg.auth_env.empty()) {
    const char* value = std::getenv(cfg.auth_env.c_str());
    if (!value || !*value) {
      throw io_error("auth environment variable '" + cfg.auth_env + "' is not set");
    }
    token = value;
  }

  std::set<std::string> done = existing_ids(out_path);
  std::vector<const PromptJob*> pending;
  for (const auto& job : jobs) {
    if (!done.count(job.puzzle_id)) pending.push_back(&job);
  }

  RunnerStats stats;
  stats.requested = static_cast<int>(jobs.size());
  stats.skipped = static_cast<int>(jobs.size() - pending.size());
  if (pending.empty()) return stats;

  std::ofstream out(out_path, std::ios::binary | std::ios::app);
  if (!out) throw io_error("cannot open for appending: " + out_path);

  std::mutex out_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<int> succeeded{0};
  std::atomic<int> failed{0};

  auto worker = [&] {
    httplib::Client client(cfg.base_url);
    client.set_connection_timeout(cfg.timeout_seconds, 0);
    client.set_read_timeout(cfg.timeout_seconds, 0);
    client.set_write_timeout(cfg.timeout_seconds, 0);
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);

    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const PromptJob& job = *pending[i];

      nlohmann::ordered_json body;
      body["model"] = cfg.model;
      body["messages"] = nlohmann::ordered_json::array(
          {{{"role", "user"}, {"content", job.prompt}}});
      const std::string payload = body.dump();

      bool ok = false;
      for (int attempt = 0; attempt <= cfg.max_retries && !ok; ++attempt) {
        if (attempt > 0) {
          std::this_thread::sleep_for(std::chrono::milliseconds(500 * attempt));
        }
        auto res = client.Post(cfg.path, headers, payload, "application/json");
        if (!res || res->status != 200) continue;
        auto j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array() ||
            j["choices"].empty()) {
          continue;
        }
        const auto& choice = j["choices"][0];
        if (!choice.contains("message") || !choice["message"].contains("content") ||
            !choice["message"]["content"].is_string()) {
          continue;
        }
        Prediction p;
        p.puzzle_id = job.puzzle_id;
        p.raw_text = choice["message"]["content"].get<std::string>();
        if (j.contains("usage") && j["usage"].contains("completion_tokens") &&
            j["usage"]["completion_tokens"].is_number_integer()) {
          p.output_tokens = j["usage"]["completion_tokens"].get<int64_t>();
        }
        {
          std::lock_guard<std::mutex> lock(out_mutex);
          append_prediction(out, p);
          out.flush();
        }
        ok = true;
      }
      if (ok) {
        succeeded.fetch_add(1);
      } else {
        failed.fetch_add(1);
        std::lock_guard<std::mutex> lock(out_mutex);
        std::cerr << "request failed after retries: " << job.puzzle_id << "\n";
      }
    }
  };

  std::vector<std::thread> threads;
  int n_threads = std::min<int>(cfg.concurrency, static_cast<int>(pending.size()));
  for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  stats.succeeded = succeeded.load();
  stats.failed = failed.load();
  return stats;
}

}  // namespace timepuzzles
