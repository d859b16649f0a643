#include "radlite/corpus.hpp"

#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "radlite/data.hpp"
#include "radlite/error.hpp"
#include "radlite/rng.hpp"
#include "radlite/text.hpp"

namespace radlite::corpus {

namespace {

using nlohmann::json;

// Stream-level seed salts so the corpus operations draw from independent
// substreams of the same user-facing seed.
constexpr std::uint64_t kSplitSalt = 0x5114'7001;
constexpr std::uint64_t kCapSalt = 0xCA90'55AA;
constexpr std::uint64_t kMixtureSalt = 0x313C'70FE;

std::string required_string(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw DataError(std::string("missing required field '") + field + "'");
  }
  if (!it->is_string()) {
    throw DataError(std::string("field '") + field + "' must be a string");
  }
  std::string value = it->get<std::string>();
  if (value.empty()) {
    throw DataError(std::string("empty '") + field + "'");
  }
  return value;
}

Sample parse_unified_record(const json& j) {
  Sample s;
  s.id = required_string(j, "id");
  const std::string task_name = required_string(j, "task");
  auto task = task_from_string(task_name);
  if (!task) throw DataError("unknown task '" + task_name + "'");
  s.task = *task;
  s.input = required_string(j, "input");
  s.target = required_string(j, "target");
  s.source_dataset = required_string(j, "source_dataset");
  s.modality = required_string(j, "modality");
  const std::string tier_name = required_string(j, "tier");
  auto tier = tier_from_string(tier_name);
  if (!tier) throw DataError("unknown tier '" + tier_name + "'");
  s.tier = *tier;

  const bool has_system =
      j.contains("rads_system") && !j.at("rads_system").is_null();
  if (s.task == TaskKind::kRadsAssignment) {
    if (!has_system) {
      throw DataError(
          "task 'rads_assignment' requires 'rads_system' (invariant: "
          "rads_system present exactly when task is rads_assignment)");
    }
    if (!j.at("rads_system").is_string() ||
        j.at("rads_system").get<std::string>().empty()) {
      throw DataError("'rads_system' must be a non-empty string");
    }
    s.rads_system = j.at("rads_system").get<std::string>();
  } else if (has_system) {
    throw DataError(
        "'rads_system' is only allowed for task 'rads_assignment' "
        "(invariant: rads_system present exactly when task is "
        "rads_assignment)");
  }
  return s;
}

}  // namespace

IngestResult ingest(const std::filesystem::path& file,
                    std::string_view schema_id) {
  if (schema_id != "unified-v1" && schema_id != "unified") {
    throw DataError("unknown dataset schema '" + std::string(schema_id) +
                    "' (supported: unified-v1)");
  }
  std::ifstream in(file);
  if (!in) {
    throw DataError("cannot open dataset file: " + file.string());
  }

  IngestResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      if (!j.is_object()) throw DataError("record is not an object");
      Sample s = parse_unified_record(j);
      if (!seen_ids.insert(s.id).second) {
        throw DataError("duplicate id '" + s.id + "'");
      }
      result.samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      result.rejections.push_back(
          {line_no, std::string("invalid JSON: ") + e.what(), line});
    } catch (const DataError& e) {
      result.rejections.push_back({line_no, e.what(), line});
    }
  }
  return result;
}

std::vector<Sample> dedupe(std::vector<Sample> samples) {
  std::vector<Sample> out;
  out.reserve(samples.size());
  std::unordered_set<std::string> seen;
  for (auto& s : samples) {
    std::string key(text::trim(s.input));
    if (seen.insert(std::move(key)).second) {
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Sample> cap_task(std::vector<Sample> samples, TaskKind task,
                             std::size_t cap, std::uint64_t seed) {
  if (cap == 0) throw DataError("cap_task: cap must be positive");
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].task == task) indices.push_back(i);
  }
  if (indices.size() <= cap) return samples;

  Rng rng(Rng::mix(seed, kCapSalt + task_index(task)));
  deterministic_shuffle(indices, rng);
  std::vector<char> drop(samples.size(), 0);
  for (std::size_t k = cap; k < indices.size(); ++k) drop[indices[k]] = 1;

  std::vector<Sample> out;
  out.reserve(samples.size() - (indices.size() - cap));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!drop[i]) out.push_back(std::move(samples[i]));
  }
  return out;
}

SplitResult split(std::vector<Sample> samples, const SplitSpec& spec) {
  std::array<std::vector<std::size_t>, kTaskCount> by_task;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_task[task_index(samples[i].task)].push_back(i);
  }

  std::vector<char> in_test(samples.size(), 0);
  for (TaskKind t : kAllTasks) {
    auto& pool = by_task[task_index(t)];
    if (pool.empty()) continue;
    const std::size_t want = spec.size_for(t);
    if (want > pool.size()) {
      throw DataError("split: test_size " + std::to_string(want) +
                      " for task '" + std::string(to_string(t)) +
                      "' exceeds pool of " + std::to_string(pool.size()));
    }
    Rng rng(Rng::mix(spec.seed, kSplitSalt + task_index(t)));
    deterministic_shuffle(pool, rng);
    for (std::size_t k = 0; k < want; ++k) in_test[pool[k]] = 1;
  }

  SplitResult result;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (in_test[i] ? result.test : result.train).push_back(std::move(samples[i]));
  }
  return result;
}

MixtureWeights MixtureWeights::defaults() {
  MixtureWeights w;
  w.set(TaskKind::kRadsAssignment, 3.0);
  w.set(TaskKind::kNli, 3.0);
  w.set(TaskKind::kImpression, 1.5);
  w.set(TaskKind::kTemporal, 1.5);
  w.set(TaskKind::kQa, 0.5);
  return w;
}

void MixtureWeights::set(TaskKind t, double w) {
  if (!(w > 0.0)) {
    throw DataError("mixture weight for task '" +
                    std::string(to_string(t)) + "' must be positive");
  }
  weights_[task_index(t)] = w;
}

std::vector<std::size_t> mixture_indices(const std::vector<Sample>& train,
                                         const MixtureWeights& weights,
                                         std::size_t epoch_len,
                                         std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kTaskCount> pools;
  for (std::size_t i = 0; i < train.size(); ++i) {
    pools[task_index(train[i].task)].push_back(i);
  }

  // Tasks with an empty pool contribute zero mass and are skipped; the
  // split legitimately leaves some tasks (nli) with no train samples.
  std::vector<std::size_t> tasks;
  std::vector<double> cumulative;
  double total = 0.0;
  for (TaskKind t : kAllTasks) {
    const auto& pool = pools[task_index(t)];
    if (pool.empty()) continue;
    total += weights.at(t) * static_cast<double>(pool.size());
    tasks.push_back(task_index(t));
    cumulative.push_back(total);
  }
  if (tasks.empty()) {
    throw DataError("weighted_mixture: empty train pool for every weighted task");
  }

  Rng rng(Rng::mix(seed, kMixtureSalt));
  std::vector<std::size_t> out;
  out.reserve(epoch_len);
  for (std::size_t d = 0; d < epoch_len; ++d) {
    const double u = rng.uniform01() * total;
    std::size_t lo = 0;
    std::size_t hi = cumulative.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u < cumulative[mid]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const auto& pool = pools[tasks[lo]];
    out.push_back(pool[rng.bounded(pool.size())]);
  }
  return out;
}

std::vector<Sample> weighted_mixture(const std::vector<Sample>& train,
                                     const MixtureWeights& weights,
                                     std::size_t epoch_len,
                                     std::uint64_t seed) {
  std::vector<Sample> out;
  out.reserve(epoch_len);
  for (std::size_t i : mixture_indices(train, weights, epoch_len, seed)) {
    out.push_back(train[i]);
  }
  return out;
}

PromptTable PromptTable::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid prompt table: ") + e.what());
  }
  PromptTable table;
  table.version_ = j.value("version", 0);
  const auto& instructions = j.at("instructions");
  for (TaskKind t : kAllTasks) {
    const std::string name(to_string(t));
    if (!instructions.contains(name)) {
      throw DataError("prompt table missing instruction for task '" + name +
                      "'");
    }
    table.instructions_[task_index(t)] = instructions.at(name);
  }
  return table;
}

const PromptTable& PromptTable::builtin() {
  static const PromptTable table = from_json(data::prompt_table_json());
  return table;
}

std::string format_instruction(const Sample& sample,
                               const PromptTable& prompts) {
  std::string out = "[TASK: ";
  out += to_string(sample.task);
  out += "]\n";
  out += sample.input;
  out += '\n';
  out += prompts.instruction(sample.task);
  return out;
}

}  // namespace radlite::corpus
