#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace radlite {

/// The nine instruction-tuning task families. The string names double as
/// the task tags used in prompts and record files.
enum class TaskKind : std::uint8_t {
  kRadsAssignment,
  kImpression,
  kTemporal,
  kNer,
  kNStaging,
  kMStaging,
  kAbnormality,
  kQa,
  kNli,
};

inline constexpr std::size_t kTaskCount = 9;

inline constexpr std::array<TaskKind, kTaskCount> kAllTasks = {
    TaskKind::kRadsAssignment, TaskKind::kImpression, TaskKind::kTemporal,
    TaskKind::kNer,            TaskKind::kNStaging,   TaskKind::kMStaging,
    TaskKind::kAbnormality,    TaskKind::kQa,         TaskKind::kNli,
};

constexpr std::size_t task_index(TaskKind t) {
  return static_cast<std::size_t>(t);
}

std::string_view to_string(TaskKind t);
std::optional<TaskKind> task_from_string(std::string_view name);

enum class QualityTier : std::uint8_t { kGold, kSilver, kBronze };

std::string_view to_string(QualityTier t);
std::optional<QualityTier> tier_from_string(std::string_view name);

}  // namespace radlite
