#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "radlite/sample.hpp"

namespace radlite::corpus {

struct IngestRejection {
  std::size_t line_no = 0;  // 1-based
  std::string reason;
  std::string raw;
};

struct IngestResult {
  std::vector<Sample> samples;
  std::vector<IngestRejection> rejections;
};

/// Streams a line-delimited dataset file into Samples. Malformed lines are
/// collected as line-numbered rejections and never abort the file. Blank
/// lines are skipped. Throws DataError for an unreadable file or an unknown
/// schema id.
IngestResult ingest(const std::filesystem::path& file,
                    std::string_view schema_id = "unified-v1");

/// Exact-match dedup on input text after trimming leading/trailing
/// whitespace. Keeps the first occurrence; preserves relative order.
std::vector<Sample> dedupe(std::vector<Sample> samples);

/// Caps one task at `cap` samples via a seed-deterministic uniform
/// subsample. Other tasks are untouched; overall relative order preserved.
std::vector<Sample> cap_task(std::vector<Sample> samples, TaskKind task,
                             std::size_t cap, std::uint64_t seed);

struct SplitResult {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

/// Deterministic per-task holdout. Every task present in the input gets
/// exactly spec.size_for(task) test samples; throws DataError when a pool
/// is too small.
SplitResult split(std::vector<Sample> samples, const SplitSpec& spec);

/// Core of the task-weighted sampler: epoch_len index draws into `train`,
/// where task t is chosen with probability proportional to w_t * n_t and
/// draws within a task are uniform, all with replacement.
std::vector<std::size_t> mixture_indices(const std::vector<Sample>& train,
                                         const MixtureWeights& weights,
                                         std::size_t epoch_len,
                                         std::uint64_t seed);

/// Materialized weighted mixture (samples repeat).
std::vector<Sample> weighted_mixture(const std::vector<Sample>& train,
                                     const MixtureWeights& weights,
                                     std::size_t epoch_len,
                                     std::uint64_t seed);

/// Versioned table of fixed per-task instruction sentences.
class PromptTable {
 public:
  static const PromptTable& builtin();
  static PromptTable from_json(std::string_view json);

  int version() const { return version_; }
  const std::string& instruction(TaskKind t) const {
    return instructions_[task_index(t)];
  }

 private:
  int version_ = 0;
  std::array<std::string, kTaskCount> instructions_;
};

/// Renders the training/evaluation prompt: a `[TASK: <name>]` tag line, the
/// sample input, then the task's fixed instruction sentence. The target is
/// never included.
std::string format_instruction(const Sample& sample,
                               const PromptTable& prompts = PromptTable::builtin());

}  // namespace radlite::corpus
