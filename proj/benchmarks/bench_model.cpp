#include <benchmark/benchmark.h>

#include "forge/model.hpp"
#include "forge/util.hpp"

namespace {

forge::nn::ModelConfig toy_cfg() {
  forge::nn::ModelConfig cfg;
  cfg.n_layers = 2;
  cfg.n_heads = 4;
  cfg.d_head = 16;
  cfg.context_T = 32;
  cfg.vocab_V = 257;
  return cfg;
}

std::vector<uint32_t> ids(size_t n, size_t V) {
  forge::Rng rng(1);
  std::vector<uint32_t> out(n);
  for (auto& x : out) x = rng.below(V);
  return out;
}

void BM_Forward(benchmark::State& state) {
  const auto cfg = toy_cfg();
  forge::nn::Model model(cfg);
  model.init(3);
  const size_t B = state.range(0), T = 32;
  const auto input = ids(B * T, cfg.vocab_V);
  for (auto _ : state) {
    auto logits = model.forward(input, B, T);
    benchmark::DoNotOptimize(logits.data());
  }
  state.SetItemsProcessed(state.iterations() * B * T);
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(8);

void BM_ForwardBackward(benchmark::State& state) {
  const auto cfg = toy_cfg();
  forge::nn::Model model(cfg);
  model.init(3);
  const size_t B = state.range(0), T = 32;
  const auto input = ids(B * T, cfg.vocab_V);
  const auto target = ids(B * T, cfg.vocab_V);
  for (auto _ : state) {
    model.zero_grad();
    benchmark::DoNotOptimize(model.forward_backward(input, target, B, T));
  }
  state.SetItemsProcessed(state.iterations() * B * T);
}
BENCHMARK(BM_ForwardBackward)->Arg(8);

}  // namespace
