#include "radlite/tasks.hpp"

namespace radlite {

namespace {
constexpr std::array<std::string_view, kTaskCount> kTaskNames = {
    "rads_assignment", "impression", "temporal",    "ner", "n_staging",
    "m_staging",       "abnormality", "qa",         "nli",
};

constexpr std::array<std::string_view, 3> kTierNames = {"gold", "silver",
                                                        "bronze"};
}  // namespace

std::string_view to_string(TaskKind t) { return kTaskNames[task_index(t)]; }

std::optional<TaskKind> task_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kTaskNames.size(); ++i) {
    if (kTaskNames[i] == name) return static_cast<TaskKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(QualityTier t) {
  return kTierNames[static_cast<std::size_t>(t)];
}

std::optional<QualityTier> tier_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kTierNames.size(); ++i) {
    if (kTierNames[i] == name) return static_cast<QualityTier>(i);
  }
  return std::nullopt;
}

}  // namespace radlite
