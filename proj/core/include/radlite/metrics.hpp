#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radlite::metrics {

/// Removes every well-formed <think>...</think> span (non-greedy, multiple
/// spans allowed). An unclosed <think> removes everything to the end of the
/// text. The result is whitespace-trimmed. Idempotent.
std::string strip_think(std::string_view raw);

/// ROUGE tokenization: lowercase, split on whitespace, strip characters
/// outside [a-z0-9] from token edges, drop empty tokens. No stemming.
std::vector<std::string> tokenize(std::string_view s);

/// Longest common subsequence length over token sequences.
std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// ROUGE-L F1 between prediction and reference. Empty prediction or
/// reference yields an all-zero score.
RougeScore rouge_l_f1(std::string_view pred, std::string_view ref);

enum class TemporalLabel : std::uint8_t {
  kNew,
  kWorsened,
  kImproved,
  kResolved,
  kUnchanged,
};

std::string_view to_string(TemporalLabel l);
std::optional<TemporalLabel> temporal_label_from_string(std::string_view s);

struct TemporalItem {
  std::string finding;  // normalized phrase
  TemporalLabel label{};

  friend auto operator<=>(const TemporalItem&, const TemporalItem&) = default;
};

struct TemporalParse {
  std::set<TemporalItem> items;
  std::size_t warnings = 0;  // items dropped for unrecognized change words
};

/// Extracts (finding, change label) items from line- or semicolon-separated
/// 'finding: label' output. Unrecognized labels are dropped and counted.
TemporalParse parse_temporal(std::string_view raw);

/// |a intersect b| / |a union b|; both sets empty counts as perfect
/// agreement (1.0).
double set_jaccard(const std::set<TemporalItem>& a,
                   const std::set<TemporalItem>& b);

enum class FindingStatus : std::uint8_t { kPositive, kNegative, kUncertain };

std::string_view to_string(FindingStatus s);
std::optional<FindingStatus> status_from_string(std::string_view s);

struct AbnormalityFinding {
  std::string condition;  // member of the shipped condition inventory
  FindingStatus status{};
};

/// Versioned label inventories (abnormality conditions, temporal labels,
/// staging and NLI label sets) shipped as a data file.
class LabelSets {
 public:
  static const LabelSets& builtin();
  static LabelSets from_json(std::string_view json);

  int version() const { return version_; }
  const std::vector<std::string>& conditions() const { return conditions_; }
  const std::vector<std::string>& temporal_labels() const {
    return temporal_labels_;
  }
  const std::vector<std::string>& nli_labels() const { return nli_labels_; }
  const std::vector<std::string>& n_stage_labels() const {
    return n_stage_labels_;
  }
  const std::vector<std::string>& m_stage_labels() const {
    return m_stage_labels_;
  }

 private:
  int version_ = 0;
  std::vector<std::string> conditions_;
  std::vector<std::string> temporal_labels_;
  std::vector<std::string> nli_labels_;
  std::vector<std::string> n_stage_labels_;
  std::vector<std::string> m_stage_labels_;
};

/// Parses 'condition: status' lines over the fixed condition inventory.
/// Unknown conditions or statuses are skipped; the first assignment per
/// condition wins.
std::vector<AbnormalityFinding> parse_findings(std::string_view raw,
                                               const LabelSets& labels);

/// Mean per-condition status agreement over the ground-truth findings. A
/// condition absent from the prediction scores 0. Throws DataError when the
/// ground truth is empty.
double per_label_accuracy(std::string_view pred,
                          std::span<const AbnormalityFinding> gt,
                          const LabelSets& labels);

enum class LabelSetKind : std::uint8_t { kNStage, kMStage, kNli };

/// Case-insensitive, word-boundary search for exactly one member of the
/// label set; the earliest mention wins. Returns the canonical label
/// spelling, or nullopt when nothing matches.
std::optional<std::string> parse_label(std::string_view raw, LabelSetKind kind,
                                       const LabelSets& labels);

/// Fraction of predictions whose parsed label equals the ground truth.
/// Unparseable predictions count as wrong.
double exact_accuracy(std::span<const std::string> preds,
                      std::span<const std::string> gts, LabelSetKind kind,
                      const LabelSets& labels);

}  // namespace radlite::metrics
