#include <benchmark/benchmark.h>

#include <random>

#include "forge/dedup.hpp"

namespace {

std::string synthetic_doc(size_t words, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::string text;
  for (size_t i = 0; i < words; ++i)
    text += "tok" + std::to_string(rng() % 5000) + " ";
  return text;
}

void BM_Shingles(benchmark::State& state) {
  const auto text = synthetic_doc(state.range(0), 1);
  for (auto _ : state) {
    auto s = forge::shingle_set(forge::DocId{}, text, 5);
    benchmark::DoNotOptimize(s.shingles.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Shingles)->Arg(200)->Arg(2000);

void BM_MinHashSign(benchmark::State& state) {
  const auto text = synthetic_doc(500, 2);
  const auto shingles = forge::shingle_set(forge::DocId{}, text, 5);
  for (auto _ : state) {
    auto sig = forge::minhash_sign(shingles, state.range(0), 7);
    benchmark::DoNotOptimize(sig.values.data());
  }
  state.SetItemsProcessed(state.iterations() * shingles.shingles.size() *
                          state.range(0));
}
BENCHMARK(BM_MinHashSign)->Arg(64)->Arg(128)->Arg(256);

void BM_NearDedup(benchmark::State& state) {
  std::vector<forge::Document> docs;
  for (int i = 0; i < state.range(0); ++i) {
    forge::Document d;
    d.text = synthetic_doc(200, 100 + i);
    d.id = forge::content_id(d.text);
    docs.push_back(d);
  }
  forge::LshParams params;
  params.seed = 3;
  for (auto _ : state) {
    auto res = forge::near_dedup(docs, params);
    benchmark::DoNotOptimize(res.kept.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NearDedup)->Arg(100)->Arg(400);

}  // namespace
