#include "radlite/metrics.hpp"

#include <algorithm>

#include "json.hpp"
#include "radlite/data.hpp"
#include "radlite/error.hpp"
#include "radlite/text.hpp"

namespace radlite::metrics {

namespace {

using nlohmann::json;

constexpr std::string_view kOpenTag = "<think>";
constexpr std::string_view kCloseTag = "</think>";

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

constexpr std::array<std::string_view, 5> kTemporalNames = {
    "new", "worsened", "improved", "resolved", "unchanged"};

constexpr std::array<std::string_view, 3> kStatusNames = {"positive",
                                                          "negative",
                                                          "uncertain"};

// Strips non-label punctuation from a short label word.
std::string clean_label_word(std::string_view s) {
  std::string_view t = text::trim(s);
  while (!t.empty() && !text::is_alnum(t.back())) t.remove_suffix(1);
  while (!t.empty() && !text::is_alnum(t.front())) t.remove_prefix(1);
  return text::to_lower(t);
}

}  // namespace

std::string strip_think(std::string_view raw) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = raw.find(kOpenTag, pos);
    if (open == std::string_view::npos) {
      out.append(raw.substr(pos));
      break;
    }
    out.append(raw.substr(pos, open - pos));
    const std::size_t close = raw.find(kCloseTag, open + kOpenTag.size());
    if (close == std::string_view::npos) break;  // unclosed: drop the rest
    pos = close + kCloseTag.size();
  }
  return std::string(text::trim(out));
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !text::is_space(s[j])) ++j;
    if (j > i) {
      std::string token = text::to_lower(s.substr(i, j - i));
      std::size_t b = 0;
      std::size_t e = token.size();
      while (b < e && !is_token_char(token[b])) ++b;
      while (e > b && !is_token_char(token[e - 1])) --e;
      if (e > b) tokens.push_back(token.substr(b, e - b));
    }
    i = j;
  }
  return tokens;
}

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  if (b.size() > a.size()) std::swap(a, b);  // roll over the shorter side
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      cur[j + 1] = a[i] == b[j] ? prev[j] + 1 : std::max(prev[j + 1], cur[j]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l_f1(std::string_view pred, std::string_view ref) {
  const std::vector<std::string> p = tokenize(pred);
  const std::vector<std::string> r = tokenize(ref);
  if (p.empty() || r.empty()) return {};
  const double l = static_cast<double>(lcs_length(p, r));
  RougeScore score;
  score.precision = l / static_cast<double>(p.size());
  score.recall = l / static_cast<double>(r.size());
  if (score.precision + score.recall > 0.0) {
    score.f1 = 2.0 * score.precision * score.recall /
               (score.precision + score.recall);
  }
  return score;
}

std::string_view to_string(TemporalLabel l) {
  return kTemporalNames[static_cast<std::size_t>(l)];
}

std::optional<TemporalLabel> temporal_label_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kTemporalNames.size(); ++i) {
    if (kTemporalNames[i] == s) return static_cast<TemporalLabel>(i);
  }
  return std::nullopt;
}

TemporalParse parse_temporal(std::string_view raw) {
  TemporalParse result;
  for (std::string_view item : text::split_any(raw, "\n;")) {
    item = text::trim(item);
    if (item.empty()) continue;
    const std::size_t colon = item.rfind(':');
    if (colon == std::string_view::npos) {
      ++result.warnings;
      continue;
    }
    const std::string finding = text::normalize_phrase(item.substr(0, colon));
    const std::string label_word = clean_label_word(item.substr(colon + 1));
    const auto label = temporal_label_from_string(label_word);
    if (finding.empty() || !label) {
      ++result.warnings;
      continue;
    }
    result.items.insert({finding, *label});
  }
  return result;
}

double set_jaccard(const std::set<TemporalItem>& a,
                   const std::set<TemporalItem>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t intersection = 0;
  for (const auto& item : a) {
    if (b.contains(item)) ++intersection;
  }
  const std::size_t unions = a.size() + b.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

std::string_view to_string(FindingStatus s) {
  return kStatusNames[static_cast<std::size_t>(s)];
}

std::optional<FindingStatus> status_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == s) return static_cast<FindingStatus>(i);
  }
  return std::nullopt;
}

LabelSets LabelSets::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid label sets file: ") + e.what());
  }
  LabelSets sets;
  sets.version_ = j.value("version", 0);
  sets.conditions_ = j.at("abnormality_conditions").get<std::vector<std::string>>();
  sets.temporal_labels_ = j.at("temporal_labels").get<std::vector<std::string>>();
  sets.nli_labels_ = j.at("nli_labels").get<std::vector<std::string>>();
  sets.n_stage_labels_ = j.at("n_stage_labels").get<std::vector<std::string>>();
  sets.m_stage_labels_ = j.at("m_stage_labels").get<std::vector<std::string>>();
  if (sets.conditions_.empty()) {
    throw DataError("label sets file has no abnormality conditions");
  }
  return sets;
}

const LabelSets& LabelSets::builtin() {
  static const LabelSets sets = from_json(data::label_sets_json());
  return sets;
}

std::vector<AbnormalityFinding> parse_findings(std::string_view raw,
                                               const LabelSets& labels) {
  std::vector<AbnormalityFinding> findings;
  std::set<std::string> assigned;
  for (std::string_view item : text::split_any(raw, "\n;")) {
    item = text::trim(item);
    if (item.empty()) continue;
    const std::size_t colon = item.rfind(':');
    if (colon == std::string_view::npos) continue;
    const std::string condition =
        text::normalize_phrase(item.substr(0, colon));
    const auto status = status_from_string(clean_label_word(item.substr(colon + 1)));
    if (!status) continue;
    const bool known =
        std::find(labels.conditions().begin(), labels.conditions().end(),
                  condition) != labels.conditions().end();
    if (!known) continue;
    if (!assigned.insert(condition).second) continue;  // first mention wins
    findings.push_back({condition, *status});
  }
  return findings;
}

double per_label_accuracy(std::string_view pred,
                          std::span<const AbnormalityFinding> gt,
                          const LabelSets& labels) {
  if (gt.empty()) {
    throw DataError("per_label_accuracy: empty ground-truth finding list");
  }
  const auto assigned = parse_findings(pred, labels);
  std::size_t hits = 0;
  for (const auto& truth : gt) {
    for (const auto& f : assigned) {
      if (f.condition == truth.condition) {
        if (f.status == truth.status) ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(gt.size());
}

std::optional<std::string> parse_label(std::string_view raw, LabelSetKind kind,
                                       const LabelSets& labels) {
  const std::vector<std::string>* set = nullptr;
  switch (kind) {
    case LabelSetKind::kNStage:
      set = &labels.n_stage_labels();
      break;
    case LabelSetKind::kMStage:
      set = &labels.m_stage_labels();
      break;
    case LabelSetKind::kNli:
      set = &labels.nli_labels();
      break;
  }

  const std::string haystack = text::to_lower(raw);
  std::size_t best_pos = std::string::npos;
  std::size_t best_len = 0;
  const std::string* best = nullptr;
  for (const auto& label : *set) {
    const std::string needle = text::to_lower(label);
    std::size_t from = 0;
    while (true) {
      const std::size_t pos = haystack.find(needle, from);
      if (pos == std::string::npos) break;
      const bool left_ok = pos == 0 || !text::is_alnum(haystack[pos - 1]);
      const bool right_ok = pos + needle.size() >= haystack.size() ||
                            !text::is_alnum(haystack[pos + needle.size()]);
      if (left_ok && right_ok) {
        if (pos < best_pos || (pos == best_pos && needle.size() > best_len)) {
          best_pos = pos;
          best_len = needle.size();
          best = &label;
        }
        break;
      }
      from = pos + 1;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

double exact_accuracy(std::span<const std::string> preds,
                      std::span<const std::string> gts, LabelSetKind kind,
                      const LabelSets& labels) {
  if (preds.empty()) throw DataError("exact_accuracy: empty input");
  if (preds.size() != gts.size()) {
    throw DataError("exact_accuracy: " + std::to_string(preds.size()) +
                    " predictions vs " + std::to_string(gts.size()) +
                    " ground truths");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto parsed = parse_label(preds[i], kind, labels);
    const auto truth = parse_label(gts[i], kind, labels);
    if (!truth) {
      throw DataError("exact_accuracy: ground truth '" + gts[i] +
                      "' is not in the label set");
    }
    if (parsed && *parsed == *truth) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

}  // namespace radlite::metrics
