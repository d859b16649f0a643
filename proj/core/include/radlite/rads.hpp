#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace radlite::rads {

/// The ten supported reporting-and-data systems plus LR-TR, the LI-RADS
/// treatment-response sub-scale, which is modeled as its own system.
enum class System : std::uint8_t {
  kBiRads,
  kPiRads,
  kLiRads,
  kLrTr,
  kTiRads,
  kCadRads,
  kViRads,
  kLungRads,
  kORads,
  kNiRads,
  kGbRads,
};

inline constexpr std::size_t kSystemCount = 11;

constexpr std::size_t system_index(System s) {
  return static_cast<std::size_t>(s);
}

std::string_view to_string(System s);
std::optional<System> system_from_string(std::string_view name);

/// A canonical (system, code) pair. `rank` is the position on the system's
/// clinical severity ordering; codes with no defined order (LR-M, BI-RADS 0,
/// ...) carry no rank.
struct Category {
  System system{};
  std::string code;
  std::optional<int> rank;

  friend bool operator==(const Category& a, const Category& b) {
    return a.system == b.system && a.code == b.code;
  }
};

/// The versioned category inventory. Categories, severity ranks, and parse
/// aliases all live in the shipped data file, not in code.
class Inventory {
 public:
  static const Inventory& builtin();
  static Inventory from_json(std::string_view json);

  int version() const { return version_; }
  const std::vector<Category>& categories() const { return categories_; }

  /// Case-insensitive code lookup within a system.
  const Category* find(System system, std::string_view code) const;

  /// "BI-RADS 4A", "LI-RADS LR-M", "LR-TR Viable", ...
  static std::string canonical_text(const Category& c);

  // Matcher tables, precomputed at load. Patterns are lowercase with
  // separator characters removed.
  struct MentionPattern {
    System system;
    std::string pattern;
  };
  struct CodePattern {
    std::size_t category_index;
    std::string pattern;
  };

  const std::vector<MentionPattern>& mentions() const { return mentions_; }
  const std::vector<CodePattern>& codes_of(System s) const {
    return codes_[system_index(s)];
  }
  const std::vector<CodePattern>& standalone() const { return standalone_; }

 private:
  int version_ = 0;
  std::vector<Category> categories_;
  std::vector<MentionPattern> mentions_;                       // longest first
  std::array<std::vector<CodePattern>, kSystemCount> codes_;   // longest first
  std::vector<CodePattern> standalone_;                        // longest first
};

/// Result of parsing free text for a category mention. Unparseable input is
/// the invalid outcome, never an error.
struct ParseOutcome {
  std::optional<Category> category;
  bool valid() const { return category.has_value(); }
};

/// Finds the first category mention under the normalization rules
/// (case-insensitive, hyphens/spaces/underscores optional, code aliases).
/// A mention of a system other than `expected` still parses; `expected`
/// additionally allows bare codes of that system ("4A" for a BI-RADS query).
ParseOutcome parse(std::string_view raw, const Inventory& inventory,
                   std::optional<System> expected = std::nullopt);

/// Fraction of outputs that parse to a valid category. Throws DataError on
/// an empty list.
double validity(std::span<const std::string> outputs,
                const Inventory& inventory);

/// Exact-match accuracy after canonicalization: a prediction scores 1 iff it
/// parses valid and equals the ground truth's (system, code).
double accuracy(std::span<const std::string> preds,
                std::span<const Category> gts, const Inventory& inventory);

enum class ErrorDirection : std::uint8_t {
  kExact,
  kUndercall,
  kOvercall,
  kSafeMisclassify,
  kCrossSystemUndefined,
};

std::string_view to_string(ErrorDirection d);

/// Clinical direction of a prediction error. Canonical equality is Exact
/// even for unranked codes; cross-system predictions, invalid parses, and
/// unranked codes on either side have no defined direction.
ErrorDirection classify_error(const ParseOutcome& pred, const Category& gt);

struct SeverityReport {
  std::size_t exact = 0;
  std::size_t undercall = 0;
  std::size_t overcall = 0;
  std::size_t safe_misclassify = 0;
  std::size_t undefined = 0;

  // Shares among incorrect predictions with a defined direction
  // (undercall + overcall + safe); absent when there are none.
  std::optional<double> undercall_ratio;
  std::optional<double> overcall_ratio;
  std::optional<double> safe_ratio;

  std::size_t total() const {
    return exact + undercall + overcall + safe_misclassify + undefined;
  }
};

/// Tallies error directions over (prediction text, ground truth) pairs.
/// Prediction text is parsed with the ground truth's system as context.
SeverityReport severity_report(
    std::span<const std::pair<std::string, Category>> pairs,
    const Inventory& inventory);

/// Distribution of |rank(pred) - rank(gt)| over same-system, both-ranked,
/// non-exact pairs. adjacent_fraction is the mass at distance 1.
struct AdjacencyProfile {
  std::map<int, std::size_t> histogram;
  std::optional<double> adjacent_fraction;
  std::size_t total = 0;
};

AdjacencyProfile adjacency_profile(
    std::span<const std::pair<std::string, Category>> pairs,
    const Inventory& inventory);

}  // namespace radlite::rads
