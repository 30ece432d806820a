#pragma once

#include <string>
#include <vector>

#include "timepuzzles/evaluation.hpp"

namespace timepuzzles {

struct RunnerConfig {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string auth_env;  // env var holding a bearer token, empty = no auth
  int concurrency = 4;
  int timeout_seconds = 120;
  int max_retries = 3;
};

struct PromptJob {
  std::string puzzle_id;
  std::string prompt;
};

struct RunnerStats {
  int requested = 0;
  int skipped = 0;  // already present in the output file
  int succeeded = 0;
  int failed = 0;
};

// Sends each prompt as an OpenAI-style chat completion and appends one
// prediction line per success to `out_path`. Jobs whose puzzle_id is already
// in the file are skipped, so interrupted runs resume. Thread-safe appends;
// failures are retried with backoff and reported in the stats.
RunnerStats run_endpoint(const std::vector<PromptJob>& jobs,
                         const RunnerConfig& cfg, const std::string& out_path);

}  // namespace timepuzzles
