#include <benchmark/benchmark.h>

#include <numeric>

#include "forge/pack.hpp"

namespace {

void BM_Pack(benchmark::State& state) {
  std::vector<uint32_t> stream(state.range(0));
  std::iota(stream.begin(), stream.end(), 0);
  forge::PackConfig cfg;
  cfg.batch_rows = 125;
  cfg.context_length = 2048;
  for (auto _ : state) {
    auto res = forge::pack(stream, cfg);
    benchmark::DoNotOptimize(res.batches.data());
  }
  state.SetItemsProcessed(state.iterations() * stream.size());
}
BENCHMARK(BM_Pack)->Arg(1 << 20)->Arg(1 << 24);

}  // namespace
