// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Fixture files live under tests/fixtures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "radlite/corpus.hpp"
#include "radlite/error.hpp"
#include "radlite/harness.hpp"
#include "radlite/jsonl.hpp"
#include "radlite/metrics.hpp"
#include "radlite/rads.hpp"
#include "radlite/report.hpp"
#include "radlite/rng.hpp"
#include "radlite/stats.hpp"
#include "support/oracles.hpp"
#include "support/stub_server.hpp"

namespace fs = std::filesystem;
using namespace radlite;

namespace {

const fs::path kFixtures = RADLITE_FIXTURE_DIR;
constexpr const char* kCli = RADLITE_CLI_PATH;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

void require_near(double actual, double expected, double tol,
                  const std::string& what) {
  if (std::abs(actual - expected) > tol) {
    std::ostringstream msg;
    msg << what << ": got " << actual << ", want " << expected << " +/- " << tol;
    throw Failure(msg.str());
  }
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(static_cast<bool>(in), "cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------

void rouge_lcs_oracle_equivalence() {
  Rng rng(2024);
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> a, b;
    const std::size_t la = rng.bounded(31);
    const std::size_t lb = rng.bounded(31);
    for (std::size_t i = 0; i < la; ++i) {
      a.push_back(std::string(1, static_cast<char>('a' + rng.bounded(8))));
    }
    for (std::size_t i = 0; i < lb; ++i) {
      b.push_back(std::string(1, static_cast<char>('a' + rng.bounded(8))));
    }
    const std::size_t mine = metrics::lcs_length(a, b);
    const std::size_t ref = testing::lcs_reference(a, b);
    require(mine == ref, "LCS mismatch at trial " + std::to_string(trial));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(seconds < 5.0,
          "runtime " + std::to_string(seconds) + "s exceeds 5s budget");
}

void rads_inventory_round_trip() {
  const auto& inv = rads::Inventory::builtin();
  std::vector<std::string> canonical;
  for (const auto& entry : inv.categories()) {
    const std::string text = rads::Inventory::canonical_text(entry);
    canonical.push_back(text);
    const auto outcome = rads::parse(text, inv);
    require(outcome.valid(), "no parse for " + text);
    require(*outcome.category == entry, "wrong category for " + text);
  }
  require_near(rads::validity(canonical, inv), 1.0, 0.0,
               "validity over the inventory");
}

std::vector<std::pair<std::string, rads::Category>> severity_pairs(
    const std::vector<harness::PredictionRecord>& preds,
    const harness::GroundTruth& gt) {
  const auto& inv = rads::Inventory::builtin();
  std::vector<std::pair<std::string, rads::Category>> pairs;
  for (const auto& p : preds) {
    if (p.task != TaskKind::kRadsAssignment) continue;
    const corpus::Sample* s = gt.find(p.sample_id);
    require(s != nullptr, "missing gt for " + p.sample_id);
    const auto truth = rads::parse(s->target, inv);
    require(truth.valid(), "bad gt target " + s->target);
    pairs.emplace_back(p.normalized_output, *truth.category);
  }
  return pairs;
}

void severity_arithmetic() {
  const auto preds =
      jsonl::read_predictions(kFixtures / "pred_qwen25_ft.jsonl");
  const auto gt = harness::GroundTruth::from_samples(
      jsonl::read_samples(kFixtures / "test_split.jsonl"));
  const auto report =
      rads::severity_report(severity_pairs(preds, gt), rads::Inventory::builtin());

  require(report.exact == 385, "exact = " + std::to_string(report.exact));
  require(report.undercall == 34, "undercall = " + std::to_string(report.undercall));
  require(report.overcall == 53, "overcall = " + std::to_string(report.overcall));
  require(report.safe_misclassify == 18,
          "safe = " + std::to_string(report.safe_misclassify));
  require(report.undefined == 10, "undefined = " + std::to_string(report.undefined));
  require(report.total() == 500, "total = " + std::to_string(report.total()));

  auto pct1 = [](double r) { return std::round(r * 1000.0) / 10.0; };
  require(pct1(*report.undercall_ratio) == 32.4, "undercall ratio");
  require(pct1(*report.overcall_ratio) == 50.5, "overcall ratio");
  require(pct1(*report.safe_ratio) == 17.1, "safe ratio");
}

void oracle_routing_property() {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<harness::TaskReport> a, b;
    for (TaskKind task : kAllTasks) {
      harness::TaskReport ra, rb;
      ra.task = rb.task = task;
      ra.metric_name = rb.metric_name = "Acc";
      ra.value = rng.bounded(5) == 0 ? 0.5 : rng.uniform01();
      rb.value = rng.bounded(5) == 0 ? ra.value : rng.uniform01();
      a.push_back(ra);
      b.push_back(rb);
    }
    const auto routes = harness::oracle_route(a, b, "A", "B");
    require(routes.size() == kTaskCount, "route count");
    for (std::size_t i = 0; i < routes.size(); ++i) {
      const double expect = std::max(a[i].value, b[i].value);
      require(routes[i].oracle_value == expect, "oracle != max");
      require(routes[i].oracle_value >= a[i].value &&
                  routes[i].oracle_value >= b[i].value,
              "oracle below an individual model");
      if (a[i].value == b[i].value) {
        require(routes[i].tie && routes[i].routed_model == "A",
                "tie must route to model A with a flag");
      }
    }
  }
}

void mcnemar_exact_oracle() {
  for (std::size_t n = 1; n <= 24; ++n) {
    for (std::size_t b = 0; b <= n; ++b) {
      const std::size_t c = n - b;
      std::vector<std::pair<bool, bool>> pairs;
      for (std::size_t i = 0; i < b; ++i) pairs.push_back({true, false});
      for (std::size_t i = 0; i < c; ++i) pairs.push_back({false, true});
      pairs.push_back({true, true});
      const auto result = stats::mcnemar(pairs);
      require(result.method == stats::TestMethod::kMcNemarExact,
              "expected the exact branch");
      const double expected =
          static_cast<double>(testing::mcnemar_enumeration_p(b, c));
      require_near(result.p_value, expected, 1e-12,
                   "p(b=" + std::to_string(b) + ",c=" + std::to_string(c) + ")");
    }
  }
  // Chi-square branch with continuity correction: (|50-30|-1)^2 / 80.
  std::vector<std::pair<bool, bool>> pairs;
  for (int i = 0; i < 50; ++i) pairs.push_back({true, false});
  for (int i = 0; i < 30; ++i) pairs.push_back({false, true});
  const auto result = stats::mcnemar(pairs);
  require(result.method == stats::TestMethod::kMcNemarChi2, "expected chi2");
  require_near(result.statistic, 4.5125, 1e-9, "chi2 statistic");
}

void fixture_regression() {
  const auto gt = harness::GroundTruth::from_samples(
      jsonl::read_samples(kFixtures / "test_split.jsonl"));
  const auto preds_a =
      jsonl::read_predictions(kFixtures / "pred_qwen25_ft.jsonl");
  const auto preds_b = jsonl::read_predictions(kFixtures / "pred_qwen3_ft.jsonl");

  const auto reports_a = harness::evaluate(preds_a, gt);
  const auto reports_b = harness::evaluate(preds_b, gt);

  auto value = [](const std::vector<harness::TaskReport>& reports,
                  TaskKind task, const char* metric) {
    for (const auto& r : reports) {
      if (r.task == task && r.metric_name == metric) return r.value;
    }
    throw Failure(std::string("missing report ") + metric);
  };

  // Fine-tuned column, model A (Qwen2.5-class fixture).
  require_near(value(reports_a, TaskKind::kRadsAssignment, "Acc"), 0.770, 1e-12, "A rads Acc");
  require_near(value(reports_a, TaskKind::kRadsAssignment, "Val"), 0.990, 1e-12, "A rads Val");
  require_near(value(reports_a, TaskKind::kImpression, "ROUGE-L"), 0.502, 1e-12, "A impression");
  require_near(value(reports_a, TaskKind::kTemporal, "Jaccard"), 0.293, 1e-12, "A temporal");
  require_near(value(reports_a, TaskKind::kNer, "ROUGE-L"), 0.030, 1e-12, "A ner");
  require_near(value(reports_a, TaskKind::kNStaging, "Acc"), 0.890, 1e-12, "A n_staging");
  require_near(value(reports_a, TaskKind::kMStaging, "Acc"), 0.730, 1e-12, "A m_staging");
  require_near(value(reports_a, TaskKind::kAbnormality, "LabelAcc"), 0.000, 1e-12, "A abnormality");
  require_near(value(reports_a, TaskKind::kQa, "ROUGE-L"), 0.107, 1e-12, "A qa");
  require_near(value(reports_a, TaskKind::kNli, "Acc"), 396.0 / 480.0, 1e-12, "A nli");

  // Fine-tuned column, model B (Qwen3-class fixture).
  require_near(value(reports_b, TaskKind::kRadsAssignment, "Acc"), 0.764, 1e-12, "B rads Acc");
  require_near(value(reports_b, TaskKind::kRadsAssignment, "Val"), 1.000, 1e-12, "B rads Val");
  require_near(value(reports_b, TaskKind::kImpression, "ROUGE-L"), 0.274, 1e-12, "B impression");
  require_near(value(reports_b, TaskKind::kTemporal, "Jaccard"), 0.923, 1e-12, "B temporal");
  require_near(value(reports_b, TaskKind::kNer, "ROUGE-L"), 0.950, 1e-12, "B ner");
  require_near(value(reports_b, TaskKind::kNStaging, "Acc"), 0.890, 1e-12, "B n_staging");
  require_near(value(reports_b, TaskKind::kMStaging, "Acc"), 0.730, 1e-12, "B m_staging");
  require_near(value(reports_b, TaskKind::kAbnormality, "LabelAcc"), 0.606, 1e-12, "B abnormality");
  require_near(value(reports_b, TaskKind::kQa, "ROUGE-L"), 0.093, 1e-12, "B qa");
  require_near(value(reports_b, TaskKind::kNli, "Acc"), 391.0 / 480.0, 1e-12, "B nli");

  // Few-shot regression on the classification fixture: 0.764 -> 0.714.
  const auto preds_3shot =
      jsonl::read_predictions(kFixtures / "pred_qwen3_ft_rads_3shot.jsonl");
  const auto reports_3shot = harness::evaluate(preds_3shot, gt);
  require_near(value(reports_3shot, TaskKind::kRadsAssignment, "Acc"), 0.714,
               1e-12, "3-shot rads Acc");
  require_near(value(reports_3shot, TaskKind::kRadsAssignment, "Val"), 1.000,
               1e-12, "3-shot rads Val");
  const double delta = value(reports_3shot, TaskKind::kRadsAssignment, "Acc") -
                       value(reports_b, TaskKind::kRadsAssignment, "Acc");
  require_near(delta, -0.050, 1e-12, "few-shot delta");

  // Severity arithmetic for the model B fixture.
  {
    const auto report = rads::severity_report(severity_pairs(preds_b, gt),
                                              rads::Inventory::builtin());
    require(report.undercall == 49, "B undercall = " + std::to_string(report.undercall));
    require(report.overcall == 46, "B overcall");
    require(report.safe_misclassify == 16, "B safe");
    auto pct1 = [](double r) { return std::round(r * 1000.0) / 10.0; };
    require(pct1(*report.undercall_ratio) == 44.1, "B undercall ratio");
    require(pct1(*report.overcall_ratio) == 41.4, "B overcall ratio");
    require(pct1(*report.safe_ratio) == 14.4, "B safe ratio");
  }

  // NLI confusion rows, counted exactly.
  {
    const auto& labels = metrics::LabelSets::builtin();
    auto confusion = [&](const std::vector<harness::PredictionRecord>& preds) {
      std::vector<std::optional<std::string>> parsed;
      std::vector<std::string> truths;
      for (const auto& p : preds) {
        if (p.task != TaskKind::kNli) continue;
        const corpus::Sample* s = gt.find(p.sample_id);
        parsed.push_back(metrics::parse_label(p.normalized_output,
                                              metrics::LabelSetKind::kNli,
                                              labels));
        truths.push_back(*metrics::parse_label(
            s->target, metrics::LabelSetKind::kNli, labels));
      }
      return stats::confusion_matrix(parsed, truths, labels.nli_labels());
    };
    const auto ma = confusion(preds_a);
    const auto mb = confusion(preds_b);
    const std::size_t expect_a[3][3] = {{70, 2, 21}, {2, 76, 28}, {14, 17, 250}};
    const std::size_t expect_b[3][3] = {{73, 1, 19}, {2, 80, 24}, {28, 15, 238}};
    const std::size_t row_sums[3] = {93, 106, 281};
    for (int r = 0; r < 3; ++r) {
      require(ma.row_sum(r) == row_sums[r], "A confusion row sum");
      require(mb.row_sum(r) == row_sums[r], "B confusion row sum");
      for (int c = 0; c < 3; ++c) {
        require(ma.at(r, c) == expect_a[r][c],
                "A confusion (" + std::to_string(r) + "," + std::to_string(c) + ")");
        require(mb.at(r, c) == expect_b[r][c],
                "B confusion (" + std::to_string(r) + "," + std::to_string(c) + ")");
      }
      require(ma.at(r, 3) == 0 && mb.at(r, 3) == 0, "unparsed column");
    }
    require(ma.total == 480 && mb.total == 480, "confusion totals");
  }

  // Paired tests wired through the comparison pipeline on the fixtures.
  {
    harness::CompareOptions opts;
    opts.resamples = 1000;
    const auto comparison = harness::compare(preds_a, preds_b, gt, opts);
    for (const auto& row : comparison.rows) {
      if (row.task == TaskKind::kRadsAssignment) {
        require(row.method == stats::TestMethod::kMcNemarChi2, "rads method");
        require_near(row.p_value, 0.7277, 0.001, "rads mcnemar p");
      }
      if (row.task == TaskKind::kNli) {
        require_near(row.p_value, 0.6198, 0.001, "nli mcnemar p");
      }
      if (row.task == TaskKind::kNStaging || row.task == TaskKind::kMStaging) {
        require(row.degenerate && row.p_value == 1.0,
                "staging rows must be degenerate p=1");
      }
      if (!harness::uses_mcnemar(row.task)) {
        require(row.p_value < 0.001, "wilcoxon tasks must be significant");
      }
    }
  }
}

void sampler_convergence() {
  const auto start = std::chrono::steady_clock::now();
  struct Pool {
    TaskKind task;
    std::size_t n;
  };
  const std::vector<Pool> pools = {
      {TaskKind::kImpression, 30000}, {TaskKind::kQa, 30000},
      {TaskKind::kTemporal, 30000},   {TaskKind::kNer, 25000},
      {TaskKind::kNStaging, 19554},   {TaskKind::kAbnormality, 14962},
      {TaskKind::kRadsAssignment, 9355}, {TaskKind::kMStaging, 2235},
      {TaskKind::kNli, 480},
  };
  std::vector<corpus::Sample> train;
  train.reserve(161586);
  for (const auto& pool : pools) {
    for (std::size_t i = 0; i < pool.n; ++i) {
      corpus::Sample s;
      s.id = std::string(to_string(pool.task)) + "-" + std::to_string(i);
      s.task = pool.task;
      s.input = "x";
      s.target = "y";
      s.tier = QualityTier::kSilver;
      if (pool.task == TaskKind::kRadsAssignment) s.rads_system = "BI-RADS";
      train.push_back(std::move(s));
    }
  }
  require(train.size() == 161586, "pool construction");

  const auto weights = corpus::MixtureWeights::defaults();
  double total_mass = 0.0;
  std::array<double, kTaskCount> mass{};
  for (const auto& pool : pools) {
    mass[task_index(pool.task)] =
        weights.at(pool.task) * static_cast<double>(pool.n);
    total_mass += mass[task_index(pool.task)];
  }
  require_near(total_mass, 196216.0, 1e-9, "mass normalizer");
  require_near(mass[task_index(TaskKind::kImpression)], 45000.0, 1e-9, "impression mass");
  require_near(mass[task_index(TaskKind::kNli)], 1440.0, 1e-9, "nli mass");
  require_near(mass[task_index(TaskKind::kRadsAssignment)], 28065.0, 1e-9, "rads mass");

  const std::size_t draws = 1000000;
  const auto idx = corpus::mixture_indices(train, weights, draws, 42);
  std::array<std::size_t, kTaskCount> observed{};
  for (std::size_t i : idx) ++observed[task_index(train[i].task)];

  double chi2 = 0.0;
  for (const auto& pool : pools) {
    const double expected_frac = mass[task_index(pool.task)] / total_mass;
    const double observed_frac =
        static_cast<double>(observed[task_index(pool.task)]) /
        static_cast<double>(draws);
    require_near(observed_frac, expected_frac, 0.005,
                 std::string("fraction for ") +
                     std::string(to_string(pool.task)));
    const double expected_count = expected_frac * static_cast<double>(draws);
    const double diff =
        static_cast<double>(observed[task_index(pool.task)]) - expected_count;
    chi2 += diff * diff / expected_count;
  }
  const double p = stats::chi_square_sf(chi2, 8);
  require(p > 0.01, "goodness-of-fit p = " + std::to_string(p));

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(seconds < 30.0,
          "runtime " + std::to_string(seconds) + "s exceeds 30s budget");
}

void wilcoxon_permutation_cross_check() {
  Rng rng(31337);
  for (int inst = 0; inst < 200; ++inst) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(40);
    const double shift = (rng.uniform01() - 0.5) * 0.2;
    for (int i = 0; i < 40; ++i) {
      const double base = rng.uniform01();
      pairs.push_back({base, base + shift * rng.uniform01() +
                                 (rng.uniform01() - 0.5) * 0.3});
    }
    const auto result = stats::wilcoxon_signed_rank(pairs);
    const double perm =
        testing::wilcoxon_permutation_p(pairs, 100000, 7000 + inst);
    require_near(result.p_value, perm, 0.02,
                 "instance " + std::to_string(inst));
  }
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void end_to_end_determinism() {
  testing::StubServer stub([](const std::string& prompt) {
    if (prompt.find("[TASK: rads_assignment]") != std::string::npos) {
      return std::string("<think>scale check</think>BI-RADS 4A");
    }
    if (prompt.find("[TASK: nli]") != std::string::npos) {
      return std::string("entailment");
    }
    return std::string("no acute process");
  });
  stub.set_usage(5, 40);
  stub.set_predicted_ms(150.0);

  const fs::path work =
      fs::temp_directory_path() /
      ("radlite-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(work);

  std::vector<corpus::Sample> samples;
  {
    corpus::Sample r;
    r.id = "rads-1";
    r.task = TaskKind::kRadsAssignment;
    r.input = "Spiculated mass.";
    r.target = "BI-RADS 4A";
    r.source_dataset = "e2e";
    r.modality = "MG";
    r.rads_system = "BI-RADS";
    r.tier = QualityTier::kGold;
    samples.push_back(r);
    samples.push_back(
        [] {
          corpus::Sample s;
          s.id = "nli-1";
          s.task = TaskKind::kNli;
          s.input = "premise. hypothesis.";
          s.target = "entailment";
          s.source_dataset = "e2e";
          s.modality = "CXR";
          s.tier = QualityTier::kGold;
          return s;
        }());
    samples.push_back(
        [] {
          corpus::Sample s;
          s.id = "qa-1";
          s.task = TaskKind::kQa;
          s.input = "what is seen?";
          s.target = "no acute process";
          s.source_dataset = "e2e";
          s.modality = "CXR";
          s.tier = QualityTier::kGold;
          return s;
        }());
  }
  jsonl::write_samples(work / "samples.jsonl", samples);

  auto infer_and_eval = [&](const std::string& tag) {
    const fs::path pred = work / ("pred_" + tag + ".jsonl");
    const fs::path out = work / ("eval_" + tag);
    require(run_command(std::string(kCli) + " infer --samples " +
                        (work / "samples.jsonl").string() + " --endpoint " +
                        stub.endpoint() + " --model e2e-model --seed 42 --out " +
                        pred.string() + " > " + (work / "infer.log").string() +
                        " 2>&1") == 0,
            "infer run " + tag + " failed");
    require(run_command(std::string(kCli) + " eval --pred " + pred.string() +
                        " --gt " + (work / "samples.jsonl").string() +
                        " --seed 42 --out " + out.string() + " > " +
                        (work / "eval.log").string() + " 2>&1") == 0,
            "eval run " + tag + " failed");
    return std::make_pair(pred, out);
  };

  const auto [pred1, out1] = infer_and_eval("one");
  const auto [pred2, out2] = infer_and_eval("two");

  require(read_bytes(pred1) == read_bytes(pred2),
          "prediction files differ between runs");
  require(read_bytes(out1 / "eval_report.csv") ==
              read_bytes(out2 / "eval_report.csv"),
          "csv reports differ between runs");
  require(read_bytes(out1 / "eval_report.md") ==
              read_bytes(out2 / "eval_report.md"),
          "markdown reports differ between runs");

  bool saw_rads_budget = false;
  for (const auto& req : stub.requests()) {
    if (req.prompt.find("[TASK: rads_assignment]") != std::string::npos) {
      require(req.max_tokens == 30, "rads request max_tokens != 30");
      saw_rads_budget = true;
    }
  }
  require(saw_rads_budget, "no rads request observed");

  std::error_code ec;
  fs::remove_all(work, ec);
}

void throughput_arithmetic() {
  testing::StubServer stub([](const std::string&) {
    return std::string("t t t t t t t t t t t t t t t t t t t t");
  });
  stub.set_usage(20, 8);
  stub.set_predicted_ms(2600.0);

  harness::RunConfig cfg;
  cfg.endpoint = stub.endpoint();
  cfg.model_id = "bench";
  const std::vector<std::string> prompts = {"a", "b", "c", "d"};
  const auto report = harness::bench_throughput(cfg, prompts, 1);
  require_near(report.tokens_per_s, 7.69, 0.05, "tokens per second");
  require_near(report.mean_latency_s, 2.6, 1e-9, "mean latency");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {"rouge-l LCS equals brute-force DP on 1000 random pairs (<5s)",
       rouge_lcs_oracle_equivalence},
      {"RADS inventory round-trip with validity 1.0", rads_inventory_round_trip},
      {"severity counts {385,34,53,18,10} and ratios {32.4,50.5,17.1}",
       severity_arithmetic},
      {"oracle routing equals per-task maxima (100 random report pairs)",
       oracle_routing_property},
      {"mcnemar exact branch matches enumeration; chi2(50,30) = 4.5125",
       mcnemar_exact_oracle},
      {"fixture regression: fine-tuned column, few-shot delta, confusion rows",
       fixture_regression},
      {"weighted sampler converges over 10^6 draws (<30s)", sampler_convergence},
      {"wilcoxon normal p within 0.02 of permutation (200 instances)",
       wilcoxon_permutation_cross_check},
      {"end-to-end infer+eval determinism with 30-token rads budget",
       end_to_end_determinism},
      {"stub throughput reports 7.69 +/- 0.05 tokens/s", throughput_arithmetic},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    try {
      criterion.run();
      std::printf("[PASS] %s\n", criterion.name);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] %s: %s\n", criterion.name, e.what());
    }
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
  }
  return failures;
}
