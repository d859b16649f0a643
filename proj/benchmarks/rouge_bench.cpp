#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "radlite/metrics.hpp"
#include "radlite/rng.hpp"

namespace {

std::vector<std::string> random_tokens(std::size_t n, radlite::Rng& rng) {
  std::vector<std::string> tokens;
  tokens.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    tokens.push_back(std::string(1, static_cast<char>('a' + rng.bounded(12))) +
                     std::to_string(rng.bounded(40)));
  }
  return tokens;
}

void BM_LcsLength(benchmark::State& state) {
  radlite::Rng rng(1);
  const auto a = random_tokens(static_cast<std::size_t>(state.range(0)), rng);
  const auto b = random_tokens(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(radlite::metrics::lcs_length(a, b));
  }
}
BENCHMARK(BM_LcsLength)->Arg(16)->Arg(64)->Arg(256);

void BM_RougeLF1(benchmark::State& state) {
  radlite::Rng rng(2);
  std::string pred, ref;
  for (const auto& t : random_tokens(static_cast<std::size_t>(state.range(0)), rng)) {
    pred += t + " ";
  }
  for (const auto& t : random_tokens(static_cast<std::size_t>(state.range(0)), rng)) {
    ref += t + " ";
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(radlite::metrics::rouge_l_f1(pred, ref));
  }
}
BENCHMARK(BM_RougeLF1)->Arg(32)->Arg(128);

void BM_StripThink(benchmark::State& state) {
  std::string text = "<think>";
  for (int i = 0; i < 200; ++i) text += "reasoning step ";
  text += "</think>BI-RADS 4A";
  for (auto _ : state) {
    benchmark::DoNotOptimize(radlite::metrics::strip_think(text));
  }
}
BENCHMARK(BM_StripThink);

}  // namespace
