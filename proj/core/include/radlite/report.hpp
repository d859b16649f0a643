#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace radlite::report {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

/// Content digest of a file, "fnv1a64:<hex>". Throws DataError if unreadable.
std::string file_digest(const std::filesystem::path& path);

/// Run provenance embedded in every emitted report. The embedded form is
/// deterministic (configuration, seed, input digests); the wall-clock
/// timestamp appears only in the full sidecar form so that re-runs on
/// identical inputs emit byte-identical reports.
struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;  // logical name -> digest
  std::map<std::string, std::string> config;  // flattened settings snapshot
  std::string created_at;                     // RFC 3339 UTC; sidecar only

  static std::string now_rfc3339();

  std::string to_embedded_json() const;  // deterministic subset
  std::string to_json() const;           // full, including created_at
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// CSV with leading '#' comment lines carrying the embedded manifest.
void write_csv(const std::filesystem::path& path, const Table& table,
               const Manifest& manifest);

/// Markdown table mirroring the CSV values, manifest in a trailing comment.
void write_markdown(const std::filesystem::path& path, std::string_view title,
                    const Table& table, const Manifest& manifest);

/// Reads a report CSV back, skipping '#' comment lines.
Table read_csv(const std::filesystem::path& path);

/// Writes the full manifest (with timestamp) as a JSON sidecar.
void write_manifest(const std::filesystem::path& path,
                    const Manifest& manifest);

std::string fmt_metric(double v);  // fixed 3 decimals, paper-table style
std::string fmt_full(double v);    // up to 15 significant digits
std::string fmt_pct1(double fraction);  // "32.4%"
std::string fmt_p(double p);       // "<0.001" below the smallest threshold

}  // namespace radlite::report
