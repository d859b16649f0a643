#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "radlite/tasks.hpp"

namespace radlite::corpus {

/// One instruction-tuning instance in the unified record format.
struct Sample {
  std::string id;
  TaskKind task{};
  std::string input;
  std::string target;
  std::string source_dataset;
  std::string modality;
  std::optional<std::string> rads_system;  // present iff task == rads_assignment
  QualityTier tier{};
};

/// Per-task sampling multipliers w_t. Weights are always positive; the
/// default table triples the two clinically critical low-volume tasks.
class MixtureWeights {
 public:
  MixtureWeights() { weights_.fill(1.0); }

  static MixtureWeights defaults();

  double at(TaskKind t) const { return weights_[task_index(t)]; }
  void set(TaskKind t, double w);

 private:
  std::array<double, kTaskCount> weights_;
};

/// Deterministic train/test split parameters. test_size falls back to 500
/// per task, except nli which defaults to its full 480-sample pool.
struct SplitSpec {
  std::uint64_t seed = 42;
  std::map<TaskKind, std::size_t> test_size;

  std::size_t size_for(TaskKind t) const {
    auto it = test_size.find(t);
    if (it != test_size.end()) return it->second;
    return t == TaskKind::kNli ? 480 : 500;
  }
};

}  // namespace radlite::corpus
