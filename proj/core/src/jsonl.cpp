#include "radlite/jsonl.hpp"

#include <fstream>

#include "json.hpp"
#include "radlite/error.hpp"

namespace radlite::jsonl {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json sample_to_json(const corpus::Sample& s) {
  ordered_json j;
  j["id"] = s.id;
  j["task"] = to_string(s.task);
  j["input"] = s.input;
  j["target"] = s.target;
  j["source_dataset"] = s.source_dataset;
  j["modality"] = s.modality;
  if (s.rads_system) j["rads_system"] = *s.rads_system;
  j["tier"] = to_string(s.tier);
  return j;
}

corpus::Sample sample_from_json(const ordered_json& j) {
  corpus::Sample s;
  s.id = j.at("id").get<std::string>();
  const auto task = task_from_string(j.at("task").get<std::string>());
  if (!task) throw DataError("unknown task '" + j.at("task").get<std::string>() + "'");
  s.task = *task;
  s.input = j.at("input").get<std::string>();
  s.target = j.at("target").get<std::string>();
  s.source_dataset = j.value("source_dataset", "");
  s.modality = j.value("modality", "");
  if (j.contains("rads_system") && !j.at("rads_system").is_null()) {
    s.rads_system = j.at("rads_system").get<std::string>();
  }
  const auto tier = tier_from_string(j.value("tier", "silver"));
  if (!tier) throw DataError("unknown tier '" + j.value("tier", "") + "'");
  s.tier = *tier;
  return s;
}

ordered_json prediction_to_json(const harness::PredictionRecord& r) {
  ordered_json j;
  j["sample_id"] = r.sample_id;
  j["task"] = to_string(r.task);
  j["model_id"] = r.model_id;
  j["raw_output"] = r.raw_output;
  j["normalized_output"] = r.normalized_output;
  j["latency_ms"] = r.latency_ms;
  j["tokens_generated"] = r.tokens_generated;
  j["prompt_tokens"] = r.prompt_tokens;
  return j;
}

harness::PredictionRecord prediction_from_json(const ordered_json& j) {
  harness::PredictionRecord r;
  r.sample_id = j.at("sample_id").get<std::string>();
  const auto task = task_from_string(j.at("task").get<std::string>());
  if (!task) throw DataError("unknown task '" + j.at("task").get<std::string>() + "'");
  r.task = *task;
  r.model_id = j.at("model_id").get<std::string>();
  r.raw_output = j.at("raw_output").get<std::string>();
  r.normalized_output = j.at("normalized_output").get<std::string>();
  r.latency_ms = j.at("latency_ms").get<double>();
  r.tokens_generated = j.at("tokens_generated").get<std::uint64_t>();
  r.prompt_tokens = j.at("prompt_tokens").get<std::uint64_t>();
  return r;
}

template <typename Record, typename Parser>
std::vector<Record> read_records(const std::filesystem::path& file,
                                 Parser parse_record) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open file: " + file.string());
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_record(ordered_json::parse(line)));
    } catch (const std::exception& e) {
      throw DataError(file.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return records;
}

std::ofstream open_for_write(const std::filesystem::path& file) {
  if (file.has_parent_path()) {
    std::filesystem::create_directories(file.parent_path());
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + file.string());
  return out;
}

}  // namespace

std::string to_json_line(const corpus::Sample& s) {
  return sample_to_json(s).dump();
}

std::string to_json_line(const harness::PredictionRecord& r) {
  return prediction_to_json(r).dump();
}

std::vector<corpus::Sample> read_samples(const std::filesystem::path& file) {
  return read_records<corpus::Sample>(
      file, [](const ordered_json& j) { return sample_from_json(j); });
}

std::vector<harness::PredictionRecord> read_predictions(
    const std::filesystem::path& file) {
  return read_records<harness::PredictionRecord>(
      file, [](const ordered_json& j) { return prediction_from_json(j); });
}

void write_samples(const std::filesystem::path& file,
                   std::span<const corpus::Sample> samples) {
  auto out = open_for_write(file);
  for (const auto& s : samples) out << sample_to_json(s).dump() << '\n';
}

void write_predictions(const std::filesystem::path& file,
                       std::span<const harness::PredictionRecord> records) {
  auto out = open_for_write(file);
  for (const auto& r : records) out << prediction_to_json(r).dump() << '\n';
}

void write_mixture(const std::filesystem::path& file,
                   std::span<const corpus::Sample> draws) {
  auto out = open_for_write(file);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    ordered_json j = sample_to_json(draws[i]);
    j["draw_index"] = i;
    out << j.dump() << '\n';
  }
}

}  // namespace radlite::jsonl
