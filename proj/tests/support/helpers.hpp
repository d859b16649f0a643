#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "radlite/sample.hpp"

namespace radlite::testing {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("radlite-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline corpus::Sample make_sample(std::string id, TaskKind task,
                                  std::string input, std::string target) {
  corpus::Sample s;
  s.id = std::move(id);
  s.task = task;
  s.input = std::move(input);
  s.target = std::move(target);
  s.source_dataset = "unit-test";
  s.modality = "CXR";
  s.tier = QualityTier::kSilver;
  if (task == TaskKind::kRadsAssignment) s.rads_system = "BI-RADS";
  return s;
}

}  // namespace radlite::testing
