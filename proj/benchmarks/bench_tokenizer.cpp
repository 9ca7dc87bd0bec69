#include <benchmark/benchmark.h>

#include "forge/tokenizer.hpp"

namespace {

const forge::TokenizerModel& gpt2() {
  static auto model = forge::TokenizerModel::load(
      std::string(FORGE_SOURCE_DIR) + "/tests/data/gpt2/vocab.json",
      std::string(FORGE_SOURCE_DIR) + "/tests/data/gpt2/merges.txt");
  return model;
}

const std::string kSample =
    "module uart_tx #(parameter WIDTH = 8) (input wire clk, input wire "
    "rst_n, input wire [WIDTH-1:0] din, output reg dout); always @(posedge "
    "clk) begin if (!rst_n) dout <= 1'b0; else dout <= ^din; end endmodule "
    "The synthesis tool maps the register transfer level description onto "
    "lookup tables and flip flops inside the FPGA fabric. ";

void BM_Encode(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += kSample;
  size_t bytes = 0;
  for (auto _ : state) {
    auto ids = gpt2().encode(text);
    benchmark::DoNotOptimize(ids.data());
    bytes += text.size();
  }
  state.SetBytesProcessed(bytes);
}
BENCHMARK(BM_Encode)->Arg(1)->Arg(16)->Arg(64);

void BM_Decode(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += kSample;
  const auto ids = gpt2().encode(text);
  for (auto _ : state) {
    auto out = gpt2().decode(ids);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * ids.size());
}
BENCHMARK(BM_Decode)->Arg(16);

}  // namespace
