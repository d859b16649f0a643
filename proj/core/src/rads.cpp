#include "radlite/rads.hpp"

#include <algorithm>

#include "json.hpp"
#include "radlite/data.hpp"
#include "radlite/error.hpp"
#include "radlite/text.hpp"

namespace radlite::rads {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, kSystemCount> kSystemNames = {
    "BI-RADS", "PI-RADS", "LI-RADS",   "LR-TR",  "TI-RADS", "CAD-RADS",
    "VI-RADS", "Lung-RADS", "O-RADS",  "NI-RADS", "GB-RADS",
};

bool is_separator(char c) {
  return c == '-' || c == '_' || c == ' ' || c == '\t' || c == '.';
}

// Lowercases and drops separator characters: "BI-RADS" -> "birads",
// "LR-4" -> "lr4". Patterns are matched against raw text with separator
// runs allowed between pattern characters, which is what makes "BIRADS",
// "BI RADS" and "BI-RADS" all equivalent.
std::string normalize_pattern(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (is_separator(c)) continue;
    out.push_back(text::ascii_lower(c));
  }
  return out;
}

// Matches `pattern` (normalized) at text position i; returns one past the
// final matched character, or npos. Separator runs are permitted between
// pattern characters but not before the first one.
std::size_t match_pattern(std::string_view raw, std::size_t i,
                          std::string_view pattern) {
  std::size_t ti = i;
  for (std::size_t pi = 0; pi < pattern.size(); ++pi) {
    if (pi > 0) {
      while (ti < raw.size() && is_separator(raw[ti])) ++ti;
    }
    if (ti >= raw.size() || text::ascii_lower(raw[ti]) != pattern[pi]) {
      return std::string_view::npos;
    }
    ++ti;
  }
  return ti;
}

bool boundary_before(std::string_view raw, std::size_t i) {
  return i == 0 || !text::is_alnum(raw[i - 1]);
}

bool boundary_after(std::string_view raw, std::size_t end) {
  return end >= raw.size() || !text::is_alnum(raw[end]);
}

template <typename Patterns>
void sort_longest_first(Patterns& patterns) {
  std::stable_sort(patterns.begin(), patterns.end(),
                   [](const auto& a, const auto& b) {
                     return a.pattern.size() > b.pattern.size();
                   });
}

}  // namespace

std::string_view to_string(System s) { return kSystemNames[system_index(s)]; }

std::optional<System> system_from_string(std::string_view name) {
  const std::string norm = normalize_pattern(name);
  for (std::size_t i = 0; i < kSystemNames.size(); ++i) {
    if (normalize_pattern(kSystemNames[i]) == norm) {
      return static_cast<System>(i);
    }
  }
  return std::nullopt;
}

std::string_view to_string(ErrorDirection d) {
  switch (d) {
    case ErrorDirection::kExact:
      return "exact";
    case ErrorDirection::kUndercall:
      return "undercall";
    case ErrorDirection::kOvercall:
      return "overcall";
    case ErrorDirection::kSafeMisclassify:
      return "safe_misclassify";
    case ErrorDirection::kCrossSystemUndefined:
      return "cross_system_undefined";
  }
  return "";
}

Inventory Inventory::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid category inventory: ") + e.what());
  }

  Inventory inv;
  inv.version_ = j.value("version", 0);
  for (const auto& sys_j : j.at("systems")) {
    const std::string sys_name = sys_j.at("system");
    auto system = system_from_string(sys_name);
    if (!system) {
      throw DataError("inventory names unknown system '" + sys_name + "'");
    }

    inv.mentions_.push_back(
        {*system, normalize_pattern(std::string_view(sys_name))});
    for (const auto& alias : sys_j.value("mention_aliases", json::array())) {
      inv.mentions_.push_back(
          {*system, normalize_pattern(alias.get<std::string>())});
    }

    for (const auto& code_j : sys_j.at("codes")) {
      Category cat;
      cat.system = *system;
      cat.code = code_j.at("code").get<std::string>();
      if (code_j.contains("rank") && !code_j.at("rank").is_null()) {
        cat.rank = code_j.at("rank").get<int>();
      }
      const std::size_t index = inv.categories_.size();
      inv.categories_.push_back(cat);

      auto& codes = inv.codes_[system_index(*system)];
      codes.push_back({index, normalize_pattern(cat.code)});
      for (const auto& alias : code_j.value("aliases", json::array())) {
        codes.push_back({index, normalize_pattern(alias.get<std::string>())});
      }
      if (code_j.value("standalone", false)) {
        inv.standalone_.push_back({index, normalize_pattern(cat.code)});
      }
      for (const auto& alias :
           code_j.value("standalone_aliases", json::array())) {
        inv.standalone_.push_back(
            {index, normalize_pattern(alias.get<std::string>())});
      }
    }
  }
  if (inv.categories_.empty()) {
    throw DataError("category inventory is empty");
  }

  sort_longest_first(inv.mentions_);
  for (auto& codes : inv.codes_) sort_longest_first(codes);
  sort_longest_first(inv.standalone_);
  return inv;
}

const Inventory& Inventory::builtin() {
  static const Inventory inv = from_json(data::rads_inventory_json());
  return inv;
}

const Category* Inventory::find(System system, std::string_view code) const {
  const std::string norm = normalize_pattern(code);
  for (const auto& cat : categories_) {
    if (cat.system == system && normalize_pattern(cat.code) == norm) {
      return &cat;
    }
  }
  return nullptr;
}

std::string Inventory::canonical_text(const Category& c) {
  std::string out(to_string(c.system));
  out += ' ';
  out += c.code;
  return out;
}

ParseOutcome parse(std::string_view raw, const Inventory& inventory,
                   std::optional<System> expected) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!boundary_before(raw, i)) continue;

    // System mention followed by one of that system's codes. Mentions and
    // codes are both tried longest-first so "4A" beats "4" and "LI-RADS TR"
    // beats "LI-RADS".
    for (const auto& mention : inventory.mentions()) {
      const std::size_t m_end = match_pattern(raw, i, mention.pattern);
      if (m_end == std::string_view::npos) continue;
      std::size_t j = m_end;
      while (j < raw.size() &&
             (is_separator(raw[j]) || raw[j] == ':' || raw[j] == '=')) {
        ++j;
      }
      for (const auto& code : inventory.codes_of(mention.system)) {
        const std::size_t c_end = match_pattern(raw, j, code.pattern);
        if (c_end != std::string_view::npos && boundary_after(raw, c_end)) {
          return {inventory.categories()[code.category_index]};
        }
      }
    }

    // Self-identifying code spellings ("LR-4", "TR3", "TR-Viable").
    for (const auto& code : inventory.standalone()) {
      const std::size_t end = match_pattern(raw, i, code.pattern);
      if (end != std::string_view::npos && boundary_after(raw, end)) {
        return {inventory.categories()[code.category_index]};
      }
    }

    // Bare codes of the expected system ("4A" in a BI-RADS context).
    if (expected) {
      for (const auto& code : inventory.codes_of(*expected)) {
        const std::size_t end = match_pattern(raw, i, code.pattern);
        if (end != std::string_view::npos && boundary_after(raw, end)) {
          return {inventory.categories()[code.category_index]};
        }
      }
    }
  }
  return {};
}

double validity(std::span<const std::string> outputs,
                const Inventory& inventory) {
  if (outputs.empty()) throw DataError("validity: empty output list");
  std::size_t valid = 0;
  for (const auto& out : outputs) {
    if (parse(out, inventory).valid()) ++valid;
  }
  return static_cast<double>(valid) / static_cast<double>(outputs.size());
}

double accuracy(std::span<const std::string> preds,
                std::span<const Category> gts, const Inventory& inventory) {
  if (preds.empty()) throw DataError("accuracy: empty input");
  if (preds.size() != gts.size()) {
    throw DataError("accuracy: " + std::to_string(preds.size()) +
                    " predictions vs " + std::to_string(gts.size()) +
                    " ground truths");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const ParseOutcome outcome = parse(preds[i], inventory, gts[i].system);
    if (outcome.valid() && *outcome.category == gts[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

ErrorDirection classify_error(const ParseOutcome& pred, const Category& gt) {
  if (!pred.valid()) return ErrorDirection::kCrossSystemUndefined;
  const Category& p = *pred.category;
  if (p == gt) return ErrorDirection::kExact;
  if (p.system != gt.system || !p.rank || !gt.rank) {
    return ErrorDirection::kCrossSystemUndefined;
  }
  if (*p.rank < *gt.rank) return ErrorDirection::kUndercall;
  if (*p.rank > *gt.rank) return ErrorDirection::kOvercall;
  return ErrorDirection::kSafeMisclassify;
}

SeverityReport severity_report(
    std::span<const std::pair<std::string, Category>> pairs,
    const Inventory& inventory) {
  SeverityReport report;
  for (const auto& [pred_text, gt] : pairs) {
    const ParseOutcome outcome = parse(pred_text, inventory, gt.system);
    switch (classify_error(outcome, gt)) {
      case ErrorDirection::kExact:
        ++report.exact;
        break;
      case ErrorDirection::kUndercall:
        ++report.undercall;
        break;
      case ErrorDirection::kOvercall:
        ++report.overcall;
        break;
      case ErrorDirection::kSafeMisclassify:
        ++report.safe_misclassify;
        break;
      case ErrorDirection::kCrossSystemUndefined:
        ++report.undefined;
        break;
    }
  }
  const std::size_t directed =
      report.undercall + report.overcall + report.safe_misclassify;
  if (directed > 0) {
    const double denom = static_cast<double>(directed);
    report.undercall_ratio = static_cast<double>(report.undercall) / denom;
    report.overcall_ratio = static_cast<double>(report.overcall) / denom;
    report.safe_ratio = static_cast<double>(report.safe_misclassify) / denom;
  }
  return report;
}

AdjacencyProfile adjacency_profile(
    std::span<const std::pair<std::string, Category>> pairs,
    const Inventory& inventory) {
  AdjacencyProfile profile;
  for (const auto& [pred_text, gt] : pairs) {
    const ParseOutcome outcome = parse(pred_text, inventory, gt.system);
    if (!outcome.valid()) continue;
    const Category& p = *outcome.category;
    if (p == gt || p.system != gt.system || !p.rank || !gt.rank) continue;
    const int distance = std::abs(*p.rank - *gt.rank);
    ++profile.histogram[distance];
    ++profile.total;
  }
  if (profile.total > 0) {
    const auto it = profile.histogram.find(1);
    const std::size_t at_one = it != profile.histogram.end() ? it->second : 0;
    profile.adjacent_fraction =
        static_cast<double>(at_one) / static_cast<double>(profile.total);
  }
  return profile;
}

}  // namespace radlite::rads
