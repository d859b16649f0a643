#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "radlite/tasks.hpp"

namespace radlite::harness {

/// One model output with timing and token metadata.
struct PredictionRecord {
  std::string sample_id;
  TaskKind task{};
  std::string model_id;
  std::string raw_output;
  std::string normalized_output;  // strip_think(raw_output), trimmed
  double latency_ms = 0.0;
  std::uint64_t tokens_generated = 0;
  std::uint64_t prompt_tokens = 0;
};

/// Inference run parameters. Generation budgets are small for single-label
/// tasks and generous for free-text generation; everything is configurable.
struct RunConfig {
  std::string endpoint;  // base URL, e.g. http://127.0.0.1:8080
  std::string model_id;
  std::map<TaskKind, std::uint64_t> per_task_max_tokens = default_max_tokens();
  double temperature = 0.0;
  std::size_t few_shot_k = 0;
  bool thinking_enabled = false;
  std::uint64_t seed = 42;
  std::size_t max_concurrency = 1;
  std::size_t max_retries = 3;
  std::uint64_t bench_max_tokens = 128;

  static std::map<TaskKind, std::uint64_t> default_max_tokens() {
    return {
        {TaskKind::kRadsAssignment, 30}, {TaskKind::kImpression, 200},
        {TaskKind::kTemporal, 256},      {TaskKind::kNer, 256},
        {TaskKind::kNStaging, 10},       {TaskKind::kMStaging, 10},
        {TaskKind::kAbnormality, 256},   {TaskKind::kQa, 200},
        {TaskKind::kNli, 10},
    };
  }

  std::uint64_t max_tokens_for(TaskKind t) const {
    auto it = per_task_max_tokens.find(t);
    return it != per_task_max_tokens.end() ? it->second : 256;
  }
};

}  // namespace radlite::harness
