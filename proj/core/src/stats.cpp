#include "radlite/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "radlite/error.hpp"
#include "radlite/rng.hpp"

namespace radlite::stats {

namespace {

// Regularized upper incomplete gamma Q(a, x), series / continued-fraction
// split at x = a + 1 (Lentz's method for the fraction).
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw DataError("gamma_q: invalid arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) {
    // P(a, x) by series, Q = 1 - P
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // Q(a, x) by continued fraction
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double quantile_type7(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::string_view to_string(TestMethod m) {
  switch (m) {
    case TestMethod::kMcNemarExact:
      return "mcnemar-exact";
    case TestMethod::kMcNemarChi2:
      return "mcnemar-chi2";
    case TestMethod::kWilcoxonNormal:
      return "wilcoxon-normal";
  }
  return "";
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double chi_square_sf(double x, int df) {
  if (df < 1) throw DataError("chi_square_sf: df must be >= 1");
  if (x <= 0.0) return 1.0;
  if (df == 1) return std::erfc(std::sqrt(x / 2.0));
  return gamma_q(static_cast<double>(df) / 2.0, x / 2.0);
}

TestResult mcnemar(std::span<const std::pair<bool, bool>> pairs) {
  std::size_t b = 0;  // A correct, B wrong
  std::size_t c = 0;  // B correct, A wrong
  for (const auto& [a_ok, b_ok] : pairs) {
    if (a_ok && !b_ok) ++b;
    if (!a_ok && b_ok) ++c;
  }
  const std::size_t n = b + c;
  if (n == 0) {
    throw DataError("mcnemar: no discordant pairs (p undefined)");
  }

  TestResult result;
  result.n_effective = n;
  if (n < 25) {
    const std::size_t k = std::min(b, c);
    // Exact accumulation: C(n, i) and the partial sums stay well inside
    // double precision for n <= 24.
    double coef = 1.0;
    double tail = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
      tail += coef;
      coef = coef * static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    result.statistic = static_cast<double>(k);
    result.p_value = std::min(1.0, 2.0 * tail * std::pow(0.5, static_cast<double>(n)));
    result.method = TestMethod::kMcNemarExact;
  } else {
    const double diff = std::abs(static_cast<double>(b) - static_cast<double>(c));
    result.statistic = (diff - 1.0) * (diff - 1.0) / static_cast<double>(n);
    result.p_value = chi_square_sf(result.statistic, 1);
    result.method = TestMethod::kMcNemarChi2;
  }
  return result;
}

TestResult wilcoxon_signed_rank(
    std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) throw DataError("wilcoxon: empty input");
  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const double d = a - b;
    if (d != 0.0) diffs.push_back(d);
  }
  const std::size_t n = diffs.size();
  if (n < 10) {
    throw DataError("wilcoxon: insufficient non-zero differences (" +
                    std::to_string(n) + ", need >= 10)");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(diffs[i]) < std::abs(diffs[j]);
  });

  std::vector<double> ranks(n, 0.0);
  double tie_correction = 0.0;  // sum of t^3 - t over tie groups
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n &&
           std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) {
      ++j;
    }
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg_rank;
    const double t = static_cast<double>(j - i + 1);
    tie_correction += t * t * t - t;
    i = j + 1;
  }

  double w_plus = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (diffs[k] > 0.0) w_plus += ranks[k];
  }
  const double total = static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;
  const double w = std::min(w_plus, total - w_plus);

  const double mu = total / 2.0;
  const double var = static_cast<double>(n) * static_cast<double>(n + 1) *
                         (2.0 * static_cast<double>(n) + 1.0) / 24.0 -
                     tie_correction / 48.0;
  const double sigma = std::sqrt(var);
  // Continuity-corrected normal approximation; W <= mu by construction.
  const double z = (w - mu + 0.5) / sigma;

  TestResult result;
  result.statistic = w;
  result.p_value = std::min(1.0, 2.0 * normal_cdf(z));
  result.method = TestMethod::kWilcoxonNormal;
  result.n_effective = n;
  return result;
}

Interval bootstrap_ci(std::span<const double> scores, double level,
                      std::size_t resamples, std::uint64_t seed) {
  if (scores.empty()) throw DataError("bootstrap_ci: empty score list");
  if (resamples < 1000) {
    throw DataError("bootstrap_ci: at least 1000 resamples required");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw DataError("bootstrap_ci: level must be in (0, 1)");
  }

  const std::size_t n = scores.size();
  std::vector<double> means(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    // One derived substream per resample index: the interval does not
    // depend on how the loop is scheduled.
    Rng rng(Rng::mix(seed, r));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += scores[rng.bounded(n)];
    means[r] = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - level) / 2.0;
  return {quantile_type7(means, alpha), quantile_type7(means, 1.0 - alpha)};
}

std::size_t ConfusionMatrix::row_sum(std::size_t gt_row) const {
  std::size_t sum = 0;
  for (std::size_t c = 0; c < counts[gt_row].size(); ++c) {
    sum += counts[gt_row][c];
  }
  return sum;
}

ConfusionMatrix confusion_matrix(
    std::span<const std::optional<std::string>> preds,
    std::span<const std::string> gts, std::span<const std::string> label_set) {
  if (preds.size() != gts.size()) {
    throw DataError("confusion_matrix: prediction/ground-truth size mismatch");
  }
  ConfusionMatrix m;
  m.labels.assign(label_set.begin(), label_set.end());
  m.counts.assign(m.labels.size(),
                  std::vector<std::size_t>(m.labels.size() + 1, 0));

  auto label_index = [&](const std::string& label) -> std::size_t {
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      if (m.labels[i] == label) return i;
    }
    throw DataError("confusion_matrix: label '" + label +
                    "' is not in the label set");
  };

  for (std::size_t i = 0; i < preds.size(); ++i) {
    const std::size_t row = label_index(gts[i]);
    const std::size_t col =
        preds[i] ? label_index(*preds[i]) : m.labels.size();  // unparsed
    ++m.counts[row][col];
    ++m.total;
  }
  return m;
}

std::string_view significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "ns";
}

}  // namespace radlite::stats
