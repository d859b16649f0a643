#include "radlite/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "radlite/error.hpp"
#include "radlite/report.hpp"
#include "radlite/rng.hpp"
#include "radlite/text.hpp"

namespace radlite::harness {

namespace {

using nlohmann::json;

constexpr const char* kCompletionsPath = "/v1/completions";

std::uint64_t whitespace_token_count(std::string_view s) {
  std::uint64_t count = 0;
  bool in_token = false;
  for (char c : s) {
    const bool space = text::is_space(c);
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

struct CompletionResponse {
  std::string text;
  std::optional<std::uint64_t> completion_tokens;
  std::optional<std::uint64_t> prompt_tokens;
  std::optional<double> predicted_ms;  // server-reported generation time
};

std::optional<CompletionResponse> parse_completion(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (!j.contains("choices") || !j["choices"].is_array() ||
      j["choices"].empty()) {
    return std::nullopt;
  }
  const auto& choice = j["choices"][0];
  if (!choice.contains("text") || !choice["text"].is_string()) {
    return std::nullopt;
  }
  CompletionResponse r;
  r.text = choice["text"].get<std::string>();
  if (j.contains("usage") && j["usage"].is_object()) {
    const auto& usage = j["usage"];
    if (usage.contains("completion_tokens") &&
        usage["completion_tokens"].is_number()) {
      r.completion_tokens = usage["completion_tokens"].get<std::uint64_t>();
    }
    if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number()) {
      r.prompt_tokens = usage["prompt_tokens"].get<std::uint64_t>();
    }
  }
  if (j.contains("timings") && j["timings"].is_object()) {
    const auto& timings = j["timings"];
    if (timings.contains("predicted_ms") &&
        timings["predicted_ms"].is_number()) {
      r.predicted_ms = timings["predicted_ms"].get<double>();
    }
  }
  return r;
}

struct RequestOutcome {
  bool ok = false;               // got a 200 with a parseable completion
  CompletionResponse response;
  double wall_ms = 0.0;
};

// One POST with bounded retries on transient failures (connection errors
// and 5xx). A connection that never comes back raises EndpointError; a
// persistent non-retryable HTTP status yields ok = false.
RequestOutcome post_completion(httplib::Client& client, const RunConfig& cfg,
                               const std::string& prompt,
                               std::uint64_t max_tokens) {
  json body;
  body["model"] = cfg.model_id;
  body["prompt"] = prompt;
  body["max_tokens"] = max_tokens;
  body["temperature"] = cfg.temperature;
  body["seed"] = cfg.seed;
  const std::string payload = body.dump();

  RequestOutcome outcome;
  for (std::size_t attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    }
    const auto start = std::chrono::steady_clock::now();
    auto res = client.Post(kCompletionsPath, payload, "application/json");
    const auto end = std::chrono::steady_clock::now();
    outcome.wall_ms =
        std::chrono::duration<double, std::milli>(end - start).count();

    if (!res) continue;  // connection-level failure, retry
    if (res->status >= 500) continue;
    if (res->status != 200) return outcome;  // failed record, not fatal
    auto parsed = parse_completion(res->body);
    if (!parsed) return outcome;
    outcome.ok = true;
    outcome.response = std::move(*parsed);
    return outcome;
  }
  throw EndpointError("endpoint unreachable after " +
                      std::to_string(cfg.max_retries + 1) + " attempts: " +
                      cfg.endpoint);
}

httplib::Client make_client(const std::string& endpoint) {
  httplib::Client client(endpoint);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(600, 0);
  client.set_write_timeout(60, 0);
  return client;
}

const char* metric_name_for(TaskKind task) {
  switch (task) {
    case TaskKind::kRadsAssignment:
      return "Acc";
    case TaskKind::kImpression:
    case TaskKind::kNer:
    case TaskKind::kQa:
      return "ROUGE-L";
    case TaskKind::kTemporal:
      return "Jaccard";
    case TaskKind::kNStaging:
    case TaskKind::kMStaging:
    case TaskKind::kNli:
      return "Acc";
    case TaskKind::kAbnormality:
      return "LabelAcc";
  }
  return "";
}

metrics::LabelSetKind label_set_for(TaskKind task) {
  switch (task) {
    case TaskKind::kNStaging:
      return metrics::LabelSetKind::kNStage;
    case TaskKind::kMStaging:
      return metrics::LabelSetKind::kMStage;
    default:
      return metrics::LabelSetKind::kNli;
  }
}

TaskReport make_report(TaskKind task, std::string metric,
                       std::vector<std::string> ids,
                       std::vector<double> scores) {
  TaskReport r;
  r.task = task;
  r.metric_name = std::move(metric);
  r.n = scores.size();
  double sum = 0.0;
  for (double s : scores) sum += s;
  r.value = r.n > 0 ? sum / static_cast<double>(r.n) : 0.0;
  r.sample_ids = std::move(ids);
  r.per_sample_scores = std::move(scores);
  return r;
}

}  // namespace

GroundTruth GroundTruth::from_samples(std::vector<corpus::Sample> samples) {
  GroundTruth gt;
  for (auto& s : samples) {
    auto id = s.id;
    if (!gt.by_id_.emplace(std::move(id), std::move(s)).second) {
      throw DataError("ground truth has duplicate sample id");
    }
  }
  return gt;
}

const corpus::Sample* GroundTruth::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

std::string compose_fewshot(const corpus::Sample& sample,
                            std::span<const corpus::Sample> pool,
                            std::size_t k, std::uint64_t seed,
                            const corpus::PromptTable& prompts) {
  if (k == 0) return corpus::format_instruction(sample, prompts);
  if (pool.empty()) throw DataError("compose_fewshot: empty exemplar pool");

  auto collect = [&](auto&& predicate) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i].input == sample.input) continue;  // never leak the query
      if (predicate(pool[i])) out.push_back(i);
    }
    return out;
  };

  // Same-system exemplars for RADS queries, falling back to same-task when
  // the system pool is too small.
  std::vector<std::size_t> candidates;
  if (sample.task == TaskKind::kRadsAssignment && sample.rads_system) {
    candidates = collect([&](const corpus::Sample& s) {
      return s.task == sample.task && s.rads_system == sample.rads_system;
    });
  }
  if (candidates.size() < k) {
    candidates = collect(
        [&](const corpus::Sample& s) { return s.task == sample.task; });
  }

  Rng rng(Rng::mix(seed, report::fnv1a64(sample.id)));
  deterministic_shuffle(candidates, rng);
  if (candidates.size() > k) candidates.resize(k);

  std::string prompt;
  for (std::size_t i : candidates) {
    prompt += corpus::format_instruction(pool[i], prompts);
    prompt += '\n';
    prompt += pool[i].target;
    prompt += "\n\n";
  }
  prompt += corpus::format_instruction(sample, prompts);
  return prompt;
}

std::vector<PredictionRecord> run_inference(
    std::span<const corpus::Sample> samples, const RunConfig& config,
    const corpus::PromptTable& prompts,
    std::span<const corpus::Sample> fewshot_pool) {
  if (samples.empty()) throw DataError("run_inference: no samples");
  if (config.endpoint.empty()) throw DataError("run_inference: no endpoint");

  std::vector<PredictionRecord> records(samples.size());
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const std::size_t worker_count =
      std::max<std::size_t>(1, std::min(config.max_concurrency, samples.size()));

  auto worker = [&]() {
    auto client = make_client(config.endpoint);
    try {
      while (!failed.load()) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= samples.size()) break;
        const corpus::Sample& sample = samples[i];
        const std::string prompt =
            config.few_shot_k > 0
                ? compose_fewshot(sample, fewshot_pool, config.few_shot_k,
                                  config.seed, prompts)
                : corpus::format_instruction(sample, prompts);

        const auto outcome = post_completion(
            client, config, prompt, config.max_tokens_for(sample.task));

        PredictionRecord& rec = records[i];
        rec.sample_id = sample.id;
        rec.task = sample.task;
        rec.model_id = config.model_id;
        if (outcome.ok) {
          rec.raw_output = outcome.response.text;
          rec.normalized_output = metrics::strip_think(rec.raw_output);
          rec.latency_ms = outcome.response.predicted_ms.value_or(outcome.wall_ms);
          rec.tokens_generated = outcome.response.completion_tokens.value_or(
              whitespace_token_count(rec.raw_output));
          rec.prompt_tokens = outcome.response.prompt_tokens.value_or(
              whitespace_token_count(prompt));
        } else {
          // Server refused this request: keep the slot so n stays fixed.
          rec.latency_ms = outcome.wall_ms;
          rec.prompt_tokens = whitespace_token_count(prompt);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true);
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(worker_count);
  for (std::size_t t = 0; t < worker_count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

std::vector<TaskReport> evaluate(std::span<const PredictionRecord> predictions,
                                 const GroundTruth& gt,
                                 const rads::Inventory& inventory,
                                 const metrics::LabelSets& labels) {
  struct Scored {
    const PredictionRecord* pred;
    const corpus::Sample* truth;
  };
  std::array<std::vector<Scored>, kTaskCount> by_task;
  for (const auto& pred : predictions) {
    const corpus::Sample* truth = gt.find(pred.sample_id);
    if (!truth) {
      throw DataError("no ground truth for sample '" + pred.sample_id + "'");
    }
    if (truth->task != pred.task) {
      throw DataError("task mismatch for sample '" + pred.sample_id +
                      "': prediction says '" +
                      std::string(to_string(pred.task)) +
                      "', ground truth says '" +
                      std::string(to_string(truth->task)) + "'");
    }
    by_task[task_index(pred.task)].push_back({&pred, truth});
  }

  std::vector<TaskReport> reports;
  for (TaskKind task : kAllTasks) {
    auto& group = by_task[task_index(task)];
    if (group.empty()) continue;
    std::sort(group.begin(), group.end(), [](const Scored& a, const Scored& b) {
      return a.pred->sample_id < b.pred->sample_id;
    });

    std::vector<std::string> ids;
    ids.reserve(group.size());
    for (const auto& s : group) ids.push_back(s.pred->sample_id);

    std::vector<double> scores;
    scores.reserve(group.size());

    switch (task) {
      case TaskKind::kRadsAssignment: {
        std::vector<double> validity_scores;
        validity_scores.reserve(group.size());
        for (const auto& s : group) {
          const auto truth_cat = rads::parse(s.truth->target, inventory);
          if (!truth_cat.valid()) {
            throw DataError("unparseable ground-truth category for sample '" +
                            s.pred->sample_id + "': " + s.truth->target);
          }
          const auto outcome = rads::parse(s.pred->normalized_output,
                                           inventory, truth_cat.category->system);
          scores.push_back(outcome.valid() && *outcome.category == *truth_cat.category
                               ? 1.0
                               : 0.0);
          validity_scores.push_back(
              rads::parse(s.pred->normalized_output, inventory).valid() ? 1.0
                                                                        : 0.0);
        }
        reports.push_back(make_report(task, "Acc", ids, std::move(scores)));
        reports.push_back(
            make_report(task, "Val", std::move(ids), std::move(validity_scores)));
        continue;
      }
      case TaskKind::kImpression:
      case TaskKind::kNer:
      case TaskKind::kQa:
        for (const auto& s : group) {
          scores.push_back(
              metrics::rouge_l_f1(s.pred->normalized_output, s.truth->target).f1);
        }
        break;
      case TaskKind::kTemporal:
        for (const auto& s : group) {
          const auto pred_items =
              metrics::parse_temporal(s.pred->normalized_output).items;
          const auto truth_items =
              metrics::parse_temporal(s.truth->target).items;
          scores.push_back(metrics::set_jaccard(pred_items, truth_items));
        }
        break;
      case TaskKind::kNStaging:
      case TaskKind::kMStaging:
      case TaskKind::kNli: {
        const auto kind = label_set_for(task);
        for (const auto& s : group) {
          const auto truth_label =
              metrics::parse_label(s.truth->target, kind, labels);
          if (!truth_label) {
            throw DataError("unparseable ground-truth label for sample '" +
                            s.pred->sample_id + "': " + s.truth->target);
          }
          const auto pred_label =
              metrics::parse_label(s.pred->normalized_output, kind, labels);
          scores.push_back(pred_label && *pred_label == *truth_label ? 1.0 : 0.0);
        }
        break;
      }
      case TaskKind::kAbnormality:
        for (const auto& s : group) {
          const auto truth_findings =
              metrics::parse_findings(s.truth->target, labels);
          if (truth_findings.empty()) {
            throw DataError("ground truth has no findings for sample '" +
                            s.pred->sample_id + "'");
          }
          scores.push_back(metrics::per_label_accuracy(
              s.pred->normalized_output, truth_findings, labels));
        }
        break;
    }
    reports.push_back(
        make_report(task, metric_name_for(task), std::move(ids), std::move(scores)));
  }
  return reports;
}

std::vector<RouteEntry> oracle_route(std::span<const TaskReport> reports_a,
                                     std::span<const TaskReport> reports_b,
                                     std::string_view model_a,
                                     std::string_view model_b) {
  if (reports_a.size() != reports_b.size()) {
    throw DataError("oracle_route: report sets cover different task/metric sets");
  }
  auto find_b = [&](const TaskReport& a) -> const TaskReport* {
    for (const auto& b : reports_b) {
      if (b.task == a.task && b.metric_name == a.metric_name) return &b;
    }
    return nullptr;
  };

  std::vector<RouteEntry> routes;
  routes.reserve(reports_a.size());
  for (const auto& a : reports_a) {
    const TaskReport* b = find_b(a);
    if (!b) {
      throw DataError("oracle_route: model B has no report for task '" +
                      std::string(to_string(a.task)) + "' metric '" +
                      a.metric_name + "'");
    }
    RouteEntry entry;
    entry.task = a.task;
    entry.metric_name = a.metric_name;
    entry.value_a = a.value;
    entry.value_b = b->value;
    entry.oracle_value = std::max(a.value, b->value);
    entry.tie = a.value == b->value;
    entry.routed_model =
        std::string(b->value > a.value ? model_b : model_a);  // ties go to A
    routes.push_back(std::move(entry));
  }
  return routes;
}

bool uses_mcnemar(TaskKind task) {
  switch (task) {
    case TaskKind::kRadsAssignment:
    case TaskKind::kNStaging:
    case TaskKind::kMStaging:
    case TaskKind::kNli:
      return true;
    case TaskKind::kImpression:
    case TaskKind::kTemporal:
    case TaskKind::kNer:
    case TaskKind::kAbnormality:
    case TaskKind::kQa:
      return false;
  }
  return false;
}

ComparisonReport compare(std::span<const PredictionRecord> preds_a,
                         std::span<const PredictionRecord> preds_b,
                         const GroundTruth& gt, const CompareOptions& options,
                         const rads::Inventory& inventory,
                         const metrics::LabelSets& labels) {
  const auto reports_a = evaluate(preds_a, gt, inventory, labels);
  const auto reports_b = evaluate(preds_b, gt, inventory, labels);

  ComparisonReport report;
  if (!preds_a.empty()) report.model_a = preds_a[0].model_id;
  if (!preds_b.empty()) report.model_b = preds_b[0].model_id;

  auto primary = [](std::span<const TaskReport> reports, TaskKind task)
      -> const TaskReport* {
    for (const auto& r : reports) {
      // The paired tests run on the primary metric; rads validity is
      // reported by evaluate but not compared.
      if (r.task == task && r.metric_name != "Val") return &r;
    }
    return nullptr;
  };

  for (TaskKind task : kAllTasks) {
    const TaskReport* a = primary(reports_a, task);
    const TaskReport* b = primary(reports_b, task);
    if (!a && !b) continue;
    if (!a || !b) {
      throw DataError("compare: only one model has predictions for task '" +
                      std::string(to_string(task)) + "'");
    }
    if (a->sample_ids != b->sample_ids) {
      throw DataError("compare: prediction files disagree on sample ids for task '" +
                      std::string(to_string(task)) + "'");
    }

    ComparisonRow row;
    row.task = task;
    row.metric_name = a->metric_name;
    row.value_a = a->value;
    row.value_b = b->value;

    const std::size_t n = a->per_sample_scores.size();
    try {
      if (uses_mcnemar(task)) {
        std::vector<std::pair<bool, bool>> outcomes(n);
        for (std::size_t i = 0; i < n; ++i) {
          outcomes[i] = {a->per_sample_scores[i] == 1.0,
                         b->per_sample_scores[i] == 1.0};
        }
        const auto result = stats::mcnemar(outcomes);
        row.method = result.method;
        row.statistic = result.statistic;
        row.p_value = result.p_value;
        row.n_effective = result.n_effective;
      } else {
        std::vector<std::pair<double, double>> pairs(n);
        for (std::size_t i = 0; i < n; ++i) {
          pairs[i] = {a->per_sample_scores[i], b->per_sample_scores[i]};
        }
        const auto result = stats::wilcoxon_signed_rank(pairs);
        row.method = result.method;
        row.statistic = result.statistic;
        row.p_value = result.p_value;
        row.n_effective = result.n_effective;
      }
    } catch (const DataError&) {
      // Degenerate pairing (identical outcomes): no evidence of a
      // difference, reported as p = 1.0 with the flag set.
      row.method = uses_mcnemar(task) ? stats::TestMethod::kMcNemarExact
                                      : stats::TestMethod::kWilcoxonNormal;
      row.statistic = 0.0;
      row.p_value = 1.0;
      row.n_effective = 0;
      row.degenerate = true;
    }
    row.stars = std::string(stats::significance_stars(row.p_value));
    row.ci_a = stats::bootstrap_ci(a->per_sample_scores, options.ci_level,
                                   options.resamples,
                                   Rng::mix(options.seed, task_index(task) * 2));
    row.ci_b = stats::bootstrap_ci(b->per_sample_scores, options.ci_level,
                                   options.resamples,
                                   Rng::mix(options.seed, task_index(task) * 2 + 1));
    report.rows.push_back(std::move(row));
  }
  return report;
}

BenchReport bench_throughput(const RunConfig& config,
                             std::span<const std::string> prompts,
                             std::size_t warmup) {
  if (prompts.empty()) throw DataError("bench_throughput: no prompts");
  if (warmup < 1) throw DataError("bench_throughput: warmup must be >= 1");

  auto client = make_client(config.endpoint);

  // Latency must be uncontaminated: strictly one request in flight.
  auto one_request = [&](const std::string& prompt)
      -> std::optional<std::pair<std::uint64_t, double>> {
    const auto outcome =
        post_completion(client, config, prompt, config.bench_max_tokens);
    if (!outcome.ok) return std::nullopt;
    const double gen_ms =
        outcome.response.predicted_ms.value_or(outcome.wall_ms);
    const std::uint64_t tokens = outcome.response.completion_tokens.value_or(
        whitespace_token_count(outcome.response.text));
    return std::make_pair(tokens, gen_ms / 1000.0);
  };

  for (std::size_t i = 0; i < warmup; ++i) {
    one_request(prompts[i % prompts.size()]);
  }

  BenchReport report;
  double total_seconds = 0.0;
  for (const auto& prompt : prompts) {
    const auto r = one_request(prompt);
    if (!r) continue;
    ++report.completed;
    report.total_tokens += r->first;
    total_seconds += r->second;
  }
  if (report.completed == 0) {
    throw DataError("bench_throughput: zero completed requests after warmup");
  }
  report.mean_latency_s = total_seconds / static_cast<double>(report.completed);
  report.tokens_per_s =
      total_seconds > 0.0
          ? static_cast<double>(report.total_tokens) / total_seconds
          : 0.0;

  // Optional deployment metadata; llama.cpp-style servers expose /props.
  if (auto res = client.Get("/props"); res && res->status == 200) {
    json j = json::parse(res->body, nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
      for (const char* key : {"model_size_bytes", "model_file_size"}) {
        if (j.contains(key) && j[key].is_number()) {
          report.model_file_size_bytes = j[key].get<std::uint64_t>();
          break;
        }
      }
      for (const char* key : {"quantization", "quant_type"}) {
        if (j.contains(key) && j[key].is_string()) {
          report.quantization = j[key].get<std::string>();
          break;
        }
      }
      for (const char* key : {"threads", "n_threads"}) {
        if (j.contains(key) && j[key].is_number()) {
          report.threads = j[key].get<std::int64_t>();
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace radlite::harness
