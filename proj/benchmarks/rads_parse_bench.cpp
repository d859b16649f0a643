#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "radlite/rads.hpp"

namespace {

using radlite::rads::Inventory;

void BM_ParseCanonical(benchmark::State& state) {
  const auto& inv = Inventory::builtin();
  std::vector<std::string> texts;
  for (const auto& c : inv.categories()) {
    texts.push_back(Inventory::canonical_text(c));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(radlite::rads::parse(texts[i % texts.size()], inv));
    ++i;
  }
}
BENCHMARK(BM_ParseCanonical);

void BM_ParseNoisySentence(benchmark::State& state) {
  const auto& inv = Inventory::builtin();
  const std::string text =
      "Impression: solid hypoechoic nodule with irregular margins, most "
      "consistent with a birads4a lesion; recommend biopsy.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(radlite::rads::parse(text, inv));
  }
}
BENCHMARK(BM_ParseNoisySentence);

void BM_ParseInvalid(benchmark::State& state) {
  const auto& inv = Inventory::builtin();
  const std::string text =
      "The examination is within normal limits and no focal abnormality is "
      "identified on the current study.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(radlite::rads::parse(text, inv));
  }
}
BENCHMARK(BM_ParseInvalid);

}  // namespace
