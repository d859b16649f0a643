#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace radlite::stats {

enum class TestMethod : std::uint8_t {
  kMcNemarExact,
  kMcNemarChi2,
  kWilcoxonNormal,
};

std::string_view to_string(TestMethod m);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  TestMethod method{};
  std::size_t n_effective = 0;
};

/// McNemar's paired test on (model A correct, model B correct) outcomes.
/// With fewer than 25 discordant pairs an exact two-sided binomial tail is
/// used, p = min(1, 2 * P(X <= min(b, c))) with X ~ Binomial(b + c, 1/2);
/// otherwise the continuity-corrected chi-square (|b - c| - 1)^2 / (b + c)
/// with one degree of freedom. Throws DataError when there are no
/// discordant pairs.
TestResult mcnemar(std::span<const std::pair<bool, bool>> pairs);

/// Wilcoxon signed-rank test on paired per-sample scores. Zero differences
/// are dropped (at least 10 non-zero differences required), ties get
/// average ranks, and the two-sided p comes from the normal approximation
/// with tie-corrected variance and a 0.5 continuity correction.
TestResult wilcoxon_signed_rank(
    std::span<const std::pair<double, double>> pairs);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Seeded percentile bootstrap interval for the mean. Each resample draws
/// from its own derived substream, so results are independent of any
/// parallel execution order. Requires non-empty scores and >= 1000
/// resamples.
Interval bootstrap_ci(std::span<const double> scores, double level,
                      std::size_t resamples, std::uint64_t seed);

/// Confusion counts with ground truth on rows. Predictions that failed to
/// parse (nullopt) land in a trailing "unparsed" column.
struct ConfusionMatrix {
  std::vector<std::string> labels;  // row labels; columns are labels + "unparsed"
  std::vector<std::vector<std::size_t>> counts;
  std::size_t total = 0;

  std::size_t at(std::size_t gt_row, std::size_t pred_col) const {
    return counts[gt_row][pred_col];
  }
  std::size_t row_sum(std::size_t gt_row) const;
};

ConfusionMatrix confusion_matrix(
    std::span<const std::optional<std::string>> preds,
    std::span<const std::string> gts, std::span<const std::string> label_set);

/// "***" / "**" / "*" at p < 0.001 / 0.01 / 0.05, else "ns".
std::string_view significance_stars(double p);

/// Survival function of the chi-square distribution.
double chi_square_sf(double x, int df);

double normal_cdf(double z);

}  // namespace radlite::stats
