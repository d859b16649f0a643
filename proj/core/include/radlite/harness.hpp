#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "radlite/corpus.hpp"
#include "radlite/harness_types.hpp"
#include "radlite/metrics.hpp"
#include "radlite/rads.hpp"
#include "radlite/stats.hpp"

namespace radlite::harness {

/// Test-split samples keyed by id, used to score predictions.
class GroundTruth {
 public:
  static GroundTruth from_samples(std::vector<corpus::Sample> samples);

  const corpus::Sample* find(const std::string& id) const;
  std::size_t size() const { return by_id_.size(); }

 private:
  std::unordered_map<std::string, corpus::Sample> by_id_;
};

/// Sends every sample's prompt to a completion-protocol server. One record
/// per sample, input order preserved. Transient failures (connection errors,
/// 5xx) are retried up to config.max_retries; a connection that stays dead
/// raises EndpointError, while per-request server errors produce a failed
/// record with empty output. Latency and token counts come from the server
/// response when reported, with wall-clock / whitespace-count fallbacks.
std::vector<PredictionRecord> run_inference(
    std::span<const corpus::Sample> samples, const RunConfig& config,
    const corpus::PromptTable& prompts = corpus::PromptTable::builtin(),
    std::span<const corpus::Sample> fewshot_pool = {});

/// Few-shot prompt composition: k exemplars drawn from the pool (same
/// rads_system when available, same task otherwise), never one whose input
/// equals the query input, rendered as instruction/input/target blocks above
/// the query block. Deterministic per seed. k = 0 reduces to
/// format_instruction(sample).
std::string compose_fewshot(
    const corpus::Sample& sample, std::span<const corpus::Sample> pool,
    std::size_t k, std::uint64_t seed,
    const corpus::PromptTable& prompts = corpus::PromptTable::builtin());

/// Per-task metric values with per-sample scores retained for the paired
/// tests. `value` is the mean of per_sample_scores.
struct TaskReport {
  TaskKind task{};
  std::string metric_name;  // Acc, Val, ROUGE-L, Jaccard, LabelAcc
  double value = 0.0;
  std::size_t n = 0;
  std::vector<std::string> sample_ids;    // sorted; aligns with scores
  std::vector<double> per_sample_scores;
};

/// Dispatches each task to its metric: rads -> validity + accuracy;
/// impression/ner/qa -> mean ROUGE-L F1; temporal -> mean set-Jaccard;
/// n/m-staging and nli -> exact label accuracy; abnormality -> mean
/// per-label accuracy.
std::vector<TaskReport> evaluate(
    std::span<const PredictionRecord> predictions, const GroundTruth& gt,
    const rads::Inventory& inventory = rads::Inventory::builtin(),
    const metrics::LabelSets& labels = metrics::LabelSets::builtin());

/// Task-routed best-of-both-models ensemble entry.
struct RouteEntry {
  TaskKind task{};
  std::string metric_name;
  double value_a = 0.0;
  double value_b = 0.0;
  double oracle_value = 0.0;
  std::string routed_model;
  bool tie = false;
};

/// Per (task, metric), routes to the model with the larger value; ties go to
/// model A and are flagged. Throws DataError when the two report sets do not
/// cover the same (task, metric) pairs.
std::vector<RouteEntry> oracle_route(std::span<const TaskReport> reports_a,
                                     std::span<const TaskReport> reports_b,
                                     std::string_view model_a,
                                     std::string_view model_b);

/// True for tasks scored by exact label match (McNemar); false for tasks
/// scored by real-valued per-sample metrics (Wilcoxon).
bool uses_mcnemar(TaskKind task);

struct ComparisonRow {
  TaskKind task{};
  std::string metric_name;
  double value_a = 0.0;
  double value_b = 0.0;
  stats::TestMethod method{};
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_effective = 0;
  std::string stars;
  bool degenerate = false;  // identical outcomes; p fixed at 1.0
  stats::Interval ci_a;
  stats::Interval ci_b;
};

struct ComparisonReport {
  std::string model_a;
  std::string model_b;
  std::vector<ComparisonRow> rows;
};

struct CompareOptions {
  std::size_t resamples = 10000;
  double ci_level = 0.95;
  std::uint64_t seed = 42;
};

/// Paired significance tests per task over aligned per-sample outcomes,
/// plus bootstrap confidence intervals for both models.
ComparisonReport compare(
    std::span<const PredictionRecord> preds_a,
    std::span<const PredictionRecord> preds_b, const GroundTruth& gt,
    const CompareOptions& options = {},
    const rads::Inventory& inventory = rads::Inventory::builtin(),
    const metrics::LabelSets& labels = metrics::LabelSets::builtin());

struct BenchReport {
  std::size_t completed = 0;
  double mean_latency_s = 0.0;
  double tokens_per_s = 0.0;
  std::uint64_t total_tokens = 0;
  std::optional<std::uint64_t> model_file_size_bytes;
  std::optional<std::string> quantization;
  std::optional<std::int64_t> threads;
};

/// CPU-deployment throughput benchmark. Requests run strictly sequentially;
/// the first `warmup` requests are excluded from statistics. Per-request
/// generation time is the server-reported timing when present, wall clock
/// otherwise. Thread count / quantization / model size are echoed from the
/// server's /props metadata when it provides them.
BenchReport bench_throughput(const RunConfig& config,
                             std::span<const std::string> prompts,
                             std::size_t warmup);

}  // namespace radlite::harness
