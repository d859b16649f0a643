#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "radlite/harness_types.hpp"
#include "radlite/sample.hpp"

namespace radlite::jsonl {

std::string to_json_line(const corpus::Sample& s);
std::string to_json_line(const harness::PredictionRecord& r);

/// Strict readers for files this toolkit wrote itself; any malformed line
/// throws DataError with its line number. Tolerant ingestion of foreign
/// exports lives in corpus::ingest.
std::vector<corpus::Sample> read_samples(const std::filesystem::path& file);
std::vector<harness::PredictionRecord> read_predictions(
    const std::filesystem::path& file);

void write_samples(const std::filesystem::path& file,
                   std::span<const corpus::Sample> samples);
void write_predictions(const std::filesystem::path& file,
                       std::span<const harness::PredictionRecord> records);

/// Mixture output: the sample record plus its draw_index.
void write_mixture(const std::filesystem::path& file,
                   std::span<const corpus::Sample> draws);

}  // namespace radlite::jsonl
