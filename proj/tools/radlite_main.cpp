// radlite: corpus assembly, inference, evaluation, comparison, and
// benchmarking against a completion-protocol server.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "radlite/corpus.hpp"
#include "radlite/error.hpp"
#include "radlite/harness.hpp"
#include "radlite/jsonl.hpp"
#include "radlite/metrics.hpp"
#include "radlite/rads.hpp"
#include "radlite/report.hpp"
#include "radlite/stats.hpp"
#include "radlite/text.hpp"

namespace fs = std::filesystem;
using namespace radlite;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEndpoint = 3;

struct GlobalOptions {
  std::uint64_t seed = 42;
};

report::Manifest make_manifest(const std::string& command,
                               const GlobalOptions& global) {
  report::Manifest m;
  m.command = command;
  m.seed = global.seed;
  return m;
}

void emit(const fs::path& out_dir, const std::string& stem,
          const std::string& title, const report::Table& table,
          const report::Manifest& manifest) {
  report::write_csv(out_dir / (stem + ".csv"), table, manifest);
  report::write_markdown(out_dir / (stem + ".md"), title, table, manifest);
}

// ---------------------------------------------------------------------------
// assemble

struct AssembleOptions {
  std::string in_dir;
  std::string out_dir;
  std::string schema = "unified-v1";
  std::uint64_t cap = 30000;
  std::size_t test_size = 500;
  std::uint64_t epoch_len = 0;  // 0 -> sum of train pool sizes
  std::vector<std::string> weight_overrides;
  bool dry_run = false;
};

corpus::MixtureWeights parse_weights(const std::vector<std::string>& overrides) {
  auto weights = corpus::MixtureWeights::defaults();
  for (const auto& spec : overrides) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw DataError("bad --weight '" + spec + "', expected task=value");
    }
    const auto task = task_from_string(spec.substr(0, eq));
    if (!task) throw DataError("bad --weight task '" + spec.substr(0, eq) + "'");
    weights.set(*task, std::stod(spec.substr(eq + 1)));
  }
  return weights;
}

int cmd_assemble(const AssembleOptions& opt, const GlobalOptions& global) {
  const fs::path in_dir(opt.in_dir);
  if (!fs::is_directory(in_dir)) {
    throw DataError("input directory does not exist: " + in_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw DataError("no .jsonl dataset files in " + in_dir.string());
  }

  auto manifest = make_manifest("assemble", global);
  manifest.config["cap"] = std::to_string(opt.cap);
  manifest.config["test_size"] = std::to_string(opt.test_size);
  manifest.config["schema"] = opt.schema;

  std::vector<corpus::Sample> samples;
  struct FileRejection {
    std::string file;
    corpus::IngestRejection rejection;
  };
  std::vector<FileRejection> rejections;
  for (const auto& file : files) {
    auto result = corpus::ingest(file, opt.schema);
    for (auto& s : result.samples) samples.push_back(std::move(s));
    for (auto& r : result.rejections) {
      rejections.push_back({file.filename().string(), std::move(r)});
    }
    manifest.inputs[file.filename().string()] = report::file_digest(file);
  }

  const std::size_t ingested = samples.size();
  samples = corpus::dedupe(std::move(samples));
  const std::size_t deduped = samples.size();

  corpus::SplitSpec spec;
  spec.seed = global.seed;
  for (TaskKind t : kAllTasks) {
    spec.test_size[t] = t == TaskKind::kNli
                            ? std::min<std::size_t>(opt.test_size, 480)
                            : opt.test_size;
  }
  auto split_result = corpus::split(std::move(samples), spec);

  for (TaskKind t : kAllTasks) {
    split_result.train =
        corpus::cap_task(std::move(split_result.train), t, opt.cap, global.seed);
  }

  const auto weights = parse_weights(opt.weight_overrides);
  const std::uint64_t epoch_len =
      opt.epoch_len > 0 ? opt.epoch_len : split_result.train.size();
  const auto mixture = corpus::weighted_mixture(split_result.train, weights,
                                                epoch_len, global.seed);

  // Per-task summary, emitted as the assemble report.
  report::Table table;
  table.columns = {"task", "train", "test", "mixture_draws"};
  std::array<std::size_t, kTaskCount> train_n{}, test_n{}, mix_n{};
  for (const auto& s : split_result.train) ++train_n[task_index(s.task)];
  for (const auto& s : split_result.test) ++test_n[task_index(s.task)];
  for (const auto& s : mixture) ++mix_n[task_index(s.task)];
  for (TaskKind t : kAllTasks) {
    const auto i = task_index(t);
    if (train_n[i] + test_n[i] == 0) continue;
    table.rows.push_back({std::string(to_string(t)), std::to_string(train_n[i]),
                          std::to_string(test_n[i]), std::to_string(mix_n[i])});
  }

  std::cout << "ingested " << ingested << " samples from " << files.size()
            << " files (" << rejections.size() << " rejected lines), "
            << deduped << " after dedup, " << split_result.train.size()
            << " train / " << split_result.test.size() << " test, "
            << mixture.size() << " mixture draws\n";
  if (opt.dry_run) {
    for (const auto& row : table.rows) {
      std::cout << "  " << row[0] << ": train " << row[1] << ", test "
                << row[2] << ", mixture " << row[3] << "\n";
    }
    std::cout << "dry run: nothing written\n";
    return kExitOk;
  }

  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  jsonl::write_samples(out_dir / "train.jsonl", split_result.train);
  jsonl::write_samples(out_dir / "test.jsonl", split_result.test);
  jsonl::write_mixture(out_dir / "mixture.jsonl", mixture);

  {
    std::ofstream rejects(out_dir / "rejects.jsonl",
                          std::ios::binary | std::ios::trunc);
    for (const auto& [file, r] : rejections) {
      nlohmann::ordered_json j;
      j["file"] = file;
      j["line"] = r.line_no;
      j["reason"] = r.reason;
      j["raw"] = r.raw;
      rejects << j.dump() << '\n';
    }
  }

  emit(out_dir, "assemble_report", "Corpus assembly", table, manifest);
  manifest.created_at = report::Manifest::now_rfc3339();
  report::write_manifest(out_dir / "manifest.json", manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// infer

struct InferOptions {
  std::string samples_file;
  std::string endpoint;
  std::string model;
  std::string out_file;
  std::string pool_file;
  double temperature = 0.0;
  std::size_t concurrency = 1;
  std::size_t few_shot_k = 0;
  bool thinking = false;
  std::vector<std::string> max_tokens_overrides;
};

int cmd_infer(const InferOptions& opt, const GlobalOptions& global) {
  const auto samples = jsonl::read_samples(opt.samples_file);

  harness::RunConfig cfg;
  cfg.endpoint = opt.endpoint;
  cfg.model_id = opt.model;
  cfg.temperature = opt.temperature;
  cfg.seed = global.seed;
  cfg.max_concurrency = opt.concurrency;
  cfg.few_shot_k = opt.few_shot_k;
  cfg.thinking_enabled = opt.thinking;
  for (const auto& spec : opt.max_tokens_overrides) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw DataError("bad --max-tokens '" + spec + "', expected task=count");
    }
    const auto task = task_from_string(spec.substr(0, eq));
    if (!task) throw DataError("bad --max-tokens task '" + spec.substr(0, eq) + "'");
    cfg.per_task_max_tokens[*task] = std::stoull(spec.substr(eq + 1));
  }

  std::vector<corpus::Sample> pool;
  if (!opt.pool_file.empty()) pool = jsonl::read_samples(opt.pool_file);
  if (cfg.few_shot_k > 0 && pool.empty()) {
    throw DataError("--few-shot-k requires a non-empty --pool file");
  }

  auto records = harness::run_inference(samples, cfg,
                                        corpus::PromptTable::builtin(), pool);
  std::sort(records.begin(), records.end(),
            [](const harness::PredictionRecord& a,
               const harness::PredictionRecord& b) {
              return a.sample_id < b.sample_id;
            });
  jsonl::write_predictions(opt.out_file, records);

  auto manifest = make_manifest("infer", global);
  manifest.inputs[fs::path(opt.samples_file).filename().string()] =
      report::file_digest(opt.samples_file);
  if (!opt.pool_file.empty()) {
    manifest.inputs[fs::path(opt.pool_file).filename().string()] =
        report::file_digest(opt.pool_file);
  }
  manifest.config["endpoint"] = cfg.endpoint;
  manifest.config["model"] = cfg.model_id;
  manifest.config["temperature"] = report::fmt_full(cfg.temperature);
  manifest.config["few_shot_k"] = std::to_string(cfg.few_shot_k);
  manifest.config["thinking_enabled"] = cfg.thinking_enabled ? "true" : "false";
  manifest.config["max_concurrency"] = std::to_string(cfg.max_concurrency);
  manifest.created_at = report::Manifest::now_rfc3339();
  report::write_manifest(fs::path(opt.out_file).replace_extension(".manifest.json"),
                         manifest);

  std::cout << "wrote " << records.size() << " prediction records to "
            << opt.out_file << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::string pred_file;
  std::string gt_file;
  std::string out_dir;
};

struct PerSystemRow {
  std::string system;
  std::size_t n = 0;
  double accuracy = 0.0;
};

std::vector<PerSystemRow> per_system_accuracy(
    const std::vector<harness::TaskReport>& reports,
    const harness::GroundTruth& gt) {
  const harness::TaskReport* acc = nullptr;
  for (const auto& r : reports) {
    if (r.task == TaskKind::kRadsAssignment && r.metric_name == "Acc") acc = &r;
  }
  if (!acc) return {};
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_system;
  for (std::size_t i = 0; i < acc->sample_ids.size(); ++i) {
    const corpus::Sample* s = gt.find(acc->sample_ids[i]);
    const std::string system = s && s->rads_system ? *s->rads_system : "?";
    auto& [n, correct] = by_system[system];
    ++n;
    if (acc->per_sample_scores[i] == 1.0) ++correct;
  }
  std::vector<PerSystemRow> rows;
  for (const auto& [system, counts] : by_system) {
    rows.push_back({system, counts.first,
                    static_cast<double>(counts.second) /
                        static_cast<double>(counts.first)});
  }
  return rows;
}

report::Table eval_table(const std::vector<harness::TaskReport>& reports) {
  report::Table table;
  table.columns = {"task", "metric", "value", "n"};
  for (const auto& r : reports) {
    table.rows.push_back({std::string(to_string(r.task)), r.metric_name,
                          report::fmt_full(r.value), std::to_string(r.n)});
  }
  return table;
}

int cmd_eval(const EvalOptions& opt, const GlobalOptions& global) {
  const auto preds = jsonl::read_predictions(opt.pred_file);
  const auto gt =
      harness::GroundTruth::from_samples(jsonl::read_samples(opt.gt_file));
  const auto reports = harness::evaluate(preds, gt);

  auto manifest = make_manifest("eval", global);
  manifest.inputs[fs::path(opt.pred_file).filename().string()] =
      report::file_digest(opt.pred_file);
  manifest.inputs[fs::path(opt.gt_file).filename().string()] =
      report::file_digest(opt.gt_file);

  const fs::path out_dir(opt.out_dir);
  emit(out_dir, "eval_report", "Per-task evaluation", eval_table(reports),
       manifest);

  const auto by_system = per_system_accuracy(reports, gt);
  if (!by_system.empty()) {
    report::Table table;
    table.columns = {"system", "n", "accuracy"};
    for (const auto& row : by_system) {
      table.rows.push_back({row.system, std::to_string(row.n),
                            report::fmt_full(row.accuracy)});
    }
    emit(out_dir, "rads_by_system", "Per-system accuracy", table, manifest);
  }

  manifest.created_at = report::Manifest::now_rfc3339();
  report::write_manifest(out_dir / "manifest.json", manifest);

  for (const auto& r : reports) {
    std::cout << to_string(r.task) << " " << r.metric_name << " "
              << report::fmt_metric(r.value) << " (n=" << r.n << ")\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

struct CompareOptions {
  std::string pred_a;
  std::string pred_b;
  std::string gt_file;
  std::string out_dir;
  std::size_t resamples = 10000;
};

int cmd_compare(const CompareOptions& opt, const GlobalOptions& global) {
  const auto preds_a = jsonl::read_predictions(opt.pred_a);
  const auto preds_b = jsonl::read_predictions(opt.pred_b);
  const auto gt =
      harness::GroundTruth::from_samples(jsonl::read_samples(opt.gt_file));

  harness::CompareOptions copts;
  copts.resamples = opt.resamples;
  copts.seed = global.seed;
  const auto comparison = harness::compare(preds_a, preds_b, gt, copts);

  report::Table table;
  table.columns = {"task",    "metric",      "value_a",  "value_b",
                   "method",  "statistic",   "p_value",  "n_effective",
                   "significance", "degenerate", "ci_a_lo", "ci_a_hi",
                   "ci_b_lo", "ci_b_hi"};
  for (const auto& row : comparison.rows) {
    table.rows.push_back({std::string(to_string(row.task)), row.metric_name,
                          report::fmt_full(row.value_a),
                          report::fmt_full(row.value_b),
                          std::string(stats::to_string(row.method)),
                          report::fmt_full(row.statistic),
                          report::fmt_full(row.p_value),
                          std::to_string(row.n_effective), row.stars,
                          row.degenerate ? "true" : "false",
                          report::fmt_full(row.ci_a.lo),
                          report::fmt_full(row.ci_a.hi),
                          report::fmt_full(row.ci_b.lo),
                          report::fmt_full(row.ci_b.hi)});
  }

  auto manifest = make_manifest("compare", global);
  manifest.inputs[fs::path(opt.pred_a).filename().string()] =
      report::file_digest(opt.pred_a);
  manifest.inputs[fs::path(opt.pred_b).filename().string()] =
      report::file_digest(opt.pred_b);
  manifest.inputs[fs::path(opt.gt_file).filename().string()] =
      report::file_digest(opt.gt_file);
  manifest.config["resamples"] = std::to_string(opt.resamples);

  const fs::path out_dir(opt.out_dir);

  // Markdown mirrors the significance-table layout.
  report::Table md;
  md.columns = {"Task", comparison.model_a.empty() ? "Model A" : comparison.model_a,
                comparison.model_b.empty() ? "Model B" : comparison.model_b,
                "Test", "p-value"};
  for (const auto& row : comparison.rows) {
    md.rows.push_back({std::string(to_string(row.task)),
                       report::fmt_metric(row.value_a),
                       report::fmt_metric(row.value_b),
                       row.method == stats::TestMethod::kWilcoxonNormal
                           ? "Wilcoxon"
                           : "McNemar",
                       report::fmt_p(row.p_value) + " (" + row.stars + ")"});
  }
  report::write_csv(out_dir / "compare_report.csv", table, manifest);
  report::write_markdown(out_dir / "compare_report.md",
                         "Statistical significance tests", md, manifest);
  manifest.created_at = report::Manifest::now_rfc3339();
  report::write_manifest(out_dir / "manifest.json", manifest);

  for (const auto& row : comparison.rows) {
    std::cout << to_string(row.task) << " " << stats::to_string(row.method)
              << " p=" << report::fmt_p(row.p_value) << " (" << row.stars
              << ")\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// severity

struct SeverityOptions {
  std::string pred_file;
  std::string gt_file;
  std::string out_dir;
};

int cmd_severity(const SeverityOptions& opt, const GlobalOptions& global) {
  const auto preds = jsonl::read_predictions(opt.pred_file);
  const auto gt =
      harness::GroundTruth::from_samples(jsonl::read_samples(opt.gt_file));
  const auto& inventory = rads::Inventory::builtin();

  std::vector<std::pair<std::string, rads::Category>> pairs;
  for (const auto& pred : preds) {
    if (pred.task != TaskKind::kRadsAssignment) continue;
    const corpus::Sample* sample = gt.find(pred.sample_id);
    if (!sample) {
      throw DataError("no ground truth for sample '" + pred.sample_id + "'");
    }
    const auto truth = rads::parse(sample->target, inventory);
    if (!truth.valid()) {
      throw DataError("unparseable ground-truth category for sample '" +
                      pred.sample_id + "': " + sample->target);
    }
    pairs.emplace_back(pred.normalized_output, *truth.category);
  }
  if (pairs.empty()) {
    throw DataError("no rads_assignment predictions in " + opt.pred_file);
  }

  const auto severity = rads::severity_report(pairs, inventory);
  const auto adjacency = rads::adjacency_profile(pairs, inventory);

  auto ratio_cell = [](const std::optional<double>& r) {
    return r ? report::fmt_full(*r) : std::string();
  };

  report::Table table;
  table.columns = {"direction", "count", "ratio_among_errors"};
  table.rows = {
      {"exact", std::to_string(severity.exact), ""},
      {"undercall", std::to_string(severity.undercall),
       ratio_cell(severity.undercall_ratio)},
      {"overcall", std::to_string(severity.overcall),
       ratio_cell(severity.overcall_ratio)},
      {"safe_misclassify", std::to_string(severity.safe_misclassify),
       ratio_cell(severity.safe_ratio)},
      {"cross_system_undefined", std::to_string(severity.undefined), ""},
  };

  auto manifest = make_manifest("severity", global);
  manifest.inputs[fs::path(opt.pred_file).filename().string()] =
      report::file_digest(opt.pred_file);
  manifest.inputs[fs::path(opt.gt_file).filename().string()] =
      report::file_digest(opt.gt_file);

  const fs::path out_dir(opt.out_dir);
  report::write_csv(out_dir / "severity_report.csv", table, manifest);

  // Markdown with the defined-direction percentages alongside the counts.
  const double defined = static_cast<double>(
      severity.exact + severity.undercall + severity.overcall +
      severity.safe_misclassify);
  report::Table md;
  md.columns = {"Error type", "Count", "Share of defined",
                "Ratio among errors"};
  auto pct = [&](std::size_t count) {
    return defined > 0 ? report::fmt_pct1(static_cast<double>(count) / defined)
                       : std::string("-");
  };
  auto ratio_pct = [&](const std::optional<double>& r) {
    return r ? report::fmt_pct1(*r) : std::string("-");
  };
  md.rows = {
      {"Exact match", std::to_string(severity.exact), pct(severity.exact), "-"},
      {"Undercall (dangerous)", std::to_string(severity.undercall),
       pct(severity.undercall), ratio_pct(severity.undercall_ratio)},
      {"Overcall (conservative)", std::to_string(severity.overcall),
       pct(severity.overcall), ratio_pct(severity.overcall_ratio)},
      {"Safe misclassify", std::to_string(severity.safe_misclassify),
       pct(severity.safe_misclassify), ratio_pct(severity.safe_ratio)},
      {"Cross-system / undefined", std::to_string(severity.undefined), "-", "-"},
  };
  if (adjacency.adjacent_fraction) {
    md.rows.push_back({"Adjacent-category fraction",
                       std::to_string(adjacency.total),
                       report::fmt_pct1(*adjacency.adjacent_fraction), "-"});
  }
  report::write_markdown(out_dir / "severity_report.md",
                         "Clinical severity of classification errors", md,
                         manifest);
  manifest.created_at = report::Manifest::now_rfc3339();
  report::write_manifest(out_dir / "manifest.json", manifest);

  std::cout << "exact " << severity.exact << ", undercall "
            << severity.undercall << ", overcall " << severity.overcall
            << ", safe " << severity.safe_misclassify << ", undefined "
            << severity.undefined << " (n=" << severity.total() << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// route

struct RouteOptions {
  std::string report_a;
  std::string report_b;
  std::string out_dir;
  std::string model_a = "model-a";
  std::string model_b = "model-b";
};

std::vector<harness::TaskReport> reports_from_csv(const fs::path& path) {
  const auto table = report::read_csv(path);
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (table.columns[i] == name) return i;
    }
    throw DataError(path.string() + " has no '" + name + "' column");
  };
  const std::size_t task_col = column("task");
  const std::size_t metric_col = column("metric");
  const std::size_t value_col = column("value");
  const std::size_t n_col = column("n");

  std::vector<harness::TaskReport> reports;
  for (const auto& row : table.rows) {
    const auto task = task_from_string(row[task_col]);
    if (!task) throw DataError("unknown task '" + row[task_col] + "' in " + path.string());
    harness::TaskReport r;
    r.task = *task;
    r.metric_name = row[metric_col];
    r.value = std::stod(row[value_col]);
    r.n = std::stoull(row[n_col]);
    reports.push_back(std::move(r));
  }
  return reports;
}

int cmd_route(const RouteOptions& opt, const GlobalOptions& global) {
  const auto reports_a = reports_from_csv(opt.report_a);
  const auto reports_b = reports_from_csv(opt.report_b);
  const auto routes =
      harness::oracle_route(reports_a, reports_b, opt.model_a, opt.model_b);

  report::Table table;
  table.columns = {"task",        "metric",       "value_a", "value_b",
                   "oracle_value", "routed_model", "tie"};
  for (const auto& r : routes) {
    table.rows.push_back({std::string(to_string(r.task)), r.metric_name,
                          report::fmt_full(r.value_a),
                          report::fmt_full(r.value_b),
                          report::fmt_full(r.oracle_value), r.routed_model,
                          r.tie ? "true" : "false"});
  }

  auto manifest = make_manifest("route", global);
  manifest.inputs[fs::path(opt.report_a).filename().string()] =
      report::file_digest(opt.report_a);
  manifest.inputs[fs::path(opt.report_b).filename().string()] =
      report::file_digest(opt.report_b);

  const fs::path out_dir(opt.out_dir);
  emit(out_dir, "route_report", "Task-routed oracle ensemble", table, manifest);
  manifest.created_at = report::Manifest::now_rfc3339();
  report::write_manifest(out_dir / "manifest.json", manifest);

  for (const auto& r : routes) {
    std::cout << to_string(r.task) << " " << r.metric_name << " -> "
              << r.routed_model << " (" << report::fmt_metric(r.oracle_value)
              << (r.tie ? ", tie" : "") << ")\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fewshot

struct FewshotOptions {
  std::string pred_zero;
  std::string pred_k;
  std::string gt_file;
  std::string out_dir;
  std::size_t k = 3;
};

int cmd_fewshot(const FewshotOptions& opt, const GlobalOptions& global) {
  const auto preds_zero = jsonl::read_predictions(opt.pred_zero);
  const auto preds_k = jsonl::read_predictions(opt.pred_k);
  const auto gt =
      harness::GroundTruth::from_samples(jsonl::read_samples(opt.gt_file));

  const auto reports_zero = harness::evaluate(preds_zero, gt);
  const auto reports_k = harness::evaluate(preds_k, gt);

  auto value_of = [](const std::vector<harness::TaskReport>& reports,
                     const char* metric) -> const harness::TaskReport* {
    for (const auto& r : reports) {
      if (r.task == TaskKind::kRadsAssignment && r.metric_name == metric) {
        return &r;
      }
    }
    return nullptr;
  };
  const auto* acc_zero = value_of(reports_zero, "Acc");
  const auto* acc_k = value_of(reports_k, "Acc");
  const auto* val_zero = value_of(reports_zero, "Val");
  const auto* val_k = value_of(reports_k, "Val");
  if (!acc_zero || !acc_k) {
    throw DataError("fewshot requires rads_assignment predictions in both files");
  }

  report::Table table;
  table.columns = {"section", "system", "n",      "metric",
                   "zero_shot", "k_shot", "delta"};
  auto add_row = [&](const std::string& section, const std::string& system,
                     std::size_t n, const std::string& metric, double zero,
                     double k) {
    table.rows.push_back({section, system, std::to_string(n), metric,
                          report::fmt_full(zero), report::fmt_full(k),
                          report::fmt_full(k - zero)});
  };
  add_row("overall", "", val_zero->n, "Val", val_zero->value, val_k->value);
  add_row("overall", "", acc_zero->n, "Acc", acc_zero->value, acc_k->value);

  const auto by_system_zero = per_system_accuracy(reports_zero, gt);
  const auto by_system_k = per_system_accuracy(reports_k, gt);
  for (const auto& row : by_system_zero) {
    for (const auto& other : by_system_k) {
      if (other.system == row.system) {
        add_row("system", row.system, row.n, "Acc", row.accuracy,
                other.accuracy);
      }
    }
  }

  auto manifest = make_manifest("fewshot", global);
  manifest.inputs[fs::path(opt.pred_zero).filename().string()] =
      report::file_digest(opt.pred_zero);
  manifest.inputs[fs::path(opt.pred_k).filename().string()] =
      report::file_digest(opt.pred_k);
  manifest.inputs[fs::path(opt.gt_file).filename().string()] =
      report::file_digest(opt.gt_file);
  manifest.config["k"] = std::to_string(opt.k);

  const fs::path out_dir(opt.out_dir);
  emit(out_dir, "fewshot_report", "Few-shot prompting regression", table,
       manifest);
  manifest.created_at = report::Manifest::now_rfc3339();
  report::write_manifest(out_dir / "manifest.json", manifest);

  std::cout << "overall acc " << report::fmt_metric(acc_zero->value) << " -> "
            << report::fmt_metric(acc_k->value) << " (delta "
            << report::fmt_metric(acc_k->value - acc_zero->value) << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::string endpoint;
  std::string model;
  std::string prompts_file;
  std::string out_dir;
  std::size_t warmup = 1;
  std::size_t requests = 0;  // 0 -> one per prompt line
  std::uint64_t max_tokens = 128;
  std::string quant_tag;
  std::int64_t threads_tag = 0;
};

int cmd_bench(const BenchOptions& opt, const GlobalOptions& global) {
  std::ifstream in(opt.prompts_file);
  if (!in) throw DataError("cannot open prompts file: " + opt.prompts_file);
  std::vector<std::string> prompts;
  std::string line;
  while (std::getline(in, line)) {
    if (!text::trim(line).empty()) prompts.push_back(line);
  }
  if (prompts.empty()) {
    throw DataError("prompts file is empty: " + opt.prompts_file);
  }
  if (opt.requests > 0) {
    std::vector<std::string> cycled;
    cycled.reserve(opt.requests);
    for (std::size_t i = 0; i < opt.requests; ++i) {
      cycled.push_back(prompts[i % prompts.size()]);
    }
    prompts = std::move(cycled);
  }

  harness::RunConfig cfg;
  cfg.endpoint = opt.endpoint;
  cfg.model_id = opt.model;
  cfg.seed = global.seed;
  cfg.bench_max_tokens = opt.max_tokens;
  cfg.max_concurrency = 1;  // latency must stay uncontaminated

  const auto bench = harness::bench_throughput(cfg, prompts, opt.warmup);

  const std::string quant =
      bench.quantization.value_or(opt.quant_tag.empty() ? "-" : opt.quant_tag);
  const std::int64_t threads = bench.threads.value_or(opt.threads_tag);

  report::Table table;
  table.columns = {"model",          "quantization", "threads",
                   "requests",       "total_tokens", "mean_latency_s",
                   "tokens_per_s",   "model_file_size_bytes"};
  table.rows.push_back(
      {opt.model, quant, threads > 0 ? std::to_string(threads) : "-",
       std::to_string(bench.completed), std::to_string(bench.total_tokens),
       report::fmt_full(bench.mean_latency_s),
       report::fmt_full(bench.tokens_per_s),
       bench.model_file_size_bytes ? std::to_string(*bench.model_file_size_bytes)
                                   : ""});

  auto manifest = make_manifest("bench", global);
  manifest.inputs[fs::path(opt.prompts_file).filename().string()] =
      report::file_digest(opt.prompts_file);
  manifest.config["endpoint"] = opt.endpoint;
  manifest.config["warmup"] = std::to_string(opt.warmup);
  manifest.config["max_tokens"] = std::to_string(opt.max_tokens);

  const fs::path out_dir(opt.out_dir);
  emit(out_dir, "bench_report", "CPU inference benchmark", table, manifest);
  manifest.created_at = report::Manifest::now_rfc3339();
  report::write_manifest(out_dir / "manifest.json", manifest);

  std::cout << "completed " << bench.completed << " requests, "
            << report::fmt_metric(bench.tokens_per_s) << " tokens/s, mean latency "
            << report::fmt_metric(bench.mean_latency_s) << " s\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radlite: multi-task radiology corpus assembly, evaluation, "
               "and CPU inference benchmarking"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Configuration file (flags override file values)")
      ->envname("RADLITE_CONFIG");

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Global random seed")
      ->envname("RADLITE_SEED")
      ->capture_default_str();

  AssembleOptions assemble;
  auto* assemble_cmd = app.add_subcommand(
      "assemble", "Ingest, dedupe, split, cap, and mix the instruction corpus");
  assemble_cmd->add_option("--in", assemble.in_dir, "Directory of .jsonl dataset files")
      ->required()
      ->envname("RADLITE_IN");
  assemble_cmd->add_option("--out", assemble.out_dir, "Output directory")
      ->envname("RADLITE_OUT");
  assemble_cmd->add_option("--schema", assemble.schema, "Dataset schema id")
      ->capture_default_str();
  assemble_cmd->add_option("--cap", assemble.cap, "Per-task training cap")
      ->capture_default_str();
  assemble_cmd->add_option("--test-size", assemble.test_size,
                           "Held-out test samples per task")
      ->capture_default_str();
  assemble_cmd->add_option("--epoch-len", assemble.epoch_len,
                           "Mixture draws (default: train pool size)");
  assemble_cmd->add_option("--weight", assemble.weight_overrides,
                           "Override a task weight, task=value (repeatable)");
  assemble_cmd->add_flag("--dry-run", assemble.dry_run,
                         "Print planned counts and write nothing");

  InferOptions infer;
  auto* infer_cmd =
      app.add_subcommand("infer", "Run prompts against a completion server");
  infer_cmd->add_option("--samples", infer.samples_file, "Sample file (jsonl)")
      ->required();
  infer_cmd->add_option("--endpoint", infer.endpoint, "Server base URL")
      ->required()
      ->envname("RADLITE_ENDPOINT");
  infer_cmd->add_option("--model", infer.model, "Model id sent to the server")
      ->required()
      ->envname("RADLITE_MODEL");
  infer_cmd->add_option("--out", infer.out_file, "Prediction output file")
      ->required();
  infer_cmd->add_option("--temperature", infer.temperature, "Sampling temperature")
      ->capture_default_str();
  infer_cmd->add_option("--concurrency", infer.concurrency,
                        "Maximum in-flight requests")
      ->capture_default_str();
  infer_cmd->add_option("--few-shot-k", infer.few_shot_k,
                        "Number of few-shot exemplars (0 = zero-shot)")
      ->capture_default_str();
  infer_cmd->add_option("--pool", infer.pool_file,
                        "Exemplar pool file for few-shot prompts");
  infer_cmd->add_flag("--thinking", infer.thinking,
                      "Record that thinking mode was requested");
  infer_cmd->add_option("--max-tokens", infer.max_tokens_overrides,
                        "Override a task budget, task=count (repeatable)");

  EvalOptions eval;
  auto* eval_cmd =
      app.add_subcommand("eval", "Score a prediction file against ground truth");
  eval_cmd->add_option("--pred", eval.pred_file, "Prediction file")->required();
  eval_cmd->add_option("--gt", eval.gt_file, "Ground-truth test split")->required();
  eval_cmd->add_option("--out", eval.out_dir, "Report directory")
      ->required()
      ->envname("RADLITE_OUT");

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand(
      "compare", "Paired significance tests between two prediction files");
  compare_cmd->add_option("--pred-a", compare.pred_a, "Model A predictions")
      ->required();
  compare_cmd->add_option("--pred-b", compare.pred_b, "Model B predictions")
      ->required();
  compare_cmd->add_option("--gt", compare.gt_file, "Ground-truth test split")
      ->required();
  compare_cmd->add_option("--out", compare.out_dir, "Report directory")->required();
  compare_cmd->add_option("--resamples", compare.resamples,
                          "Bootstrap resamples")
      ->capture_default_str();

  SeverityOptions severity;
  auto* severity_cmd = app.add_subcommand(
      "severity", "Clinical severity breakdown of classification errors");
  severity_cmd->add_option("--pred", severity.pred_file, "Prediction file")
      ->required();
  severity_cmd->add_option("--gt", severity.gt_file, "Ground-truth test split")
      ->required();
  severity_cmd->add_option("--out", severity.out_dir, "Report directory")
      ->required();

  RouteOptions route;
  auto* route_cmd = app.add_subcommand(
      "route", "Task-routed oracle ensemble from two eval reports");
  route_cmd->add_option("--report-a", route.report_a, "Model A eval_report.csv")
      ->required();
  route_cmd->add_option("--report-b", route.report_b, "Model B eval_report.csv")
      ->required();
  route_cmd->add_option("--out", route.out_dir, "Report directory")->required();
  route_cmd->add_option("--model-a", route.model_a, "Model A label")
      ->capture_default_str();
  route_cmd->add_option("--model-b", route.model_b, "Model B label")
      ->capture_default_str();

  FewshotOptions fewshot;
  auto* fewshot_cmd = app.add_subcommand(
      "fewshot", "Zero-shot vs k-shot regression on classification predictions");
  fewshot_cmd->add_option("--pred-zero", fewshot.pred_zero,
                          "Zero-shot prediction file")
      ->required();
  fewshot_cmd->add_option("--pred-k", fewshot.pred_k, "k-shot prediction file")
      ->required();
  fewshot_cmd->add_option("--gt", fewshot.gt_file, "Ground-truth test split")
      ->required();
  fewshot_cmd->add_option("--out", fewshot.out_dir, "Report directory")
      ->required();
  fewshot_cmd->add_option("--k", fewshot.k, "Exemplar count used for the k-shot run")
      ->capture_default_str();

  BenchOptions bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "Throughput benchmark against a server");
  bench_cmd->add_option("--endpoint", bench.endpoint, "Server base URL")
      ->required()
      ->envname("RADLITE_ENDPOINT");
  bench_cmd->add_option("--model", bench.model, "Model id sent to the server")
      ->required()
      ->envname("RADLITE_MODEL");
  bench_cmd->add_option("--prompts", bench.prompts_file,
                        "Prompt file, one prompt per line")
      ->required();
  bench_cmd->add_option("--out", bench.out_dir, "Report directory")->required();
  bench_cmd->add_option("--warmup", bench.warmup, "Warmup requests (excluded)")
      ->capture_default_str();
  bench_cmd->add_option("--requests", bench.requests,
                        "Total measured requests (cycles prompts)");
  bench_cmd->add_option("--max-tokens", bench.max_tokens,
                        "Generation budget per request")
      ->capture_default_str();
  bench_cmd->add_option("--quant-tag", bench.quant_tag,
                        "Quantization tag when the server reports none");
  bench_cmd->add_option("--threads-tag", bench.threads_tag,
                        "Thread count when the server reports none");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (assemble_cmd->parsed()) {
      if (!assemble.dry_run && assemble.out_dir.empty()) {
        std::cerr << "error: --out is required unless --dry-run is given\n";
        return kExitUsage;
      }
      return cmd_assemble(assemble, global);
    }
    if (infer_cmd->parsed()) return cmd_infer(infer, global);
    if (eval_cmd->parsed()) return cmd_eval(eval, global);
    if (compare_cmd->parsed()) return cmd_compare(compare, global);
    if (severity_cmd->parsed()) return cmd_severity(severity, global);
    if (route_cmd->parsed()) return cmd_route(route, global);
    if (fewshot_cmd->parsed()) return cmd_fewshot(fewshot, global);
    if (bench_cmd->parsed()) return cmd_bench(bench, global);
  } catch (const EndpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEndpoint;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
