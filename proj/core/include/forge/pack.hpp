#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "forge/document.hpp"
#include "forge/tokenizer.hpp"

namespace forge {

struct PackConfig {
  size_t batch_rows = 125;      // B
  size_t context_length = 2048; // T; rows store T+1 ids
  void validate() const {
    if (batch_rows < 1) throw ForgeError("batch_rows must be >= 1");
    if (context_length < 2) throw ForgeError("context_length must be >= 2");
  }
};

// One batch: `rows` rows of exactly T+1 ids, row-major. The input view is
// columns [0, T), the target view is columns [1, T+1).
struct PackedBatch {
  size_t batch_index = 0;
  size_t rows = 0;
  size_t row_stride = 0;  // T+1
  std::vector<uint32_t> data;

  const uint32_t* row(size_t r) const { return data.data() + r * row_stride; }
};

struct PackResult {
  std::vector<PackedBatch> batches;
  uint64_t dropped_tail = 0;
  size_t last_batch_rows = 0;  // < B when the final batch is partial
};

// encode(doc) ++ [eos] per document, in order.
std::vector<uint32_t> concat_stream(const std::vector<Document>& docs,
                                    const TokenizerModel& m);

// Seeded Fisher-Yates document shuffle (the optional pre-concat shuffle).
void shuffle_documents(std::vector<Document>& docs, uint64_t seed);

// Rows tile the stream with stride T (consecutive rows overlap by one
// token), so every adjacent (input, target) pair occurs exactly once. The
// final partial row is dropped and counted.
PackResult pack(const std::vector<uint32_t>& stream, const PackConfig& cfg);

// Packed batch file: "HPKB", version u16, B u32, T u32, id_width u8 in
// {2,4}; then batches row-major, little-endian ids.
void write_hpkb(const std::filesystem::path& p, const PackResult& result,
                const PackConfig& cfg, size_t vocab_size);
PackResult read_hpkb(const std::filesystem::path& p, PackConfig* cfg_out);

enum class Tier { Small, Medium, Large };
std::string to_string(Tier t);
Tier tier_from_string(const std::string& s);

// Nested membership: Small = {HdlCode, SecurityKnowledge};
// Medium = Small + CuratedNL; Large = Medium + WebNL.
std::set<SourceCategory> tier_categories(Tier t);

struct SourceAccount {
  SourceCategory category = SourceCategory::HdlCode;
  uint64_t documents = 0;
  uint64_t tokens = 0;  // encoded tokens + one EOS per document
};

// Per-source token accounting produced by the tokenize stage.
using CorpusManifest = std::map<std::string, SourceAccount>;

struct TierManifest {
  Tier tier = Tier::Small;
  std::set<SourceCategory> member_categories;
  uint64_t token_total = 0;
  std::map<std::string, uint64_t> per_source_tokens;
};

// Reference corpus sizes reported for the full-scale dataset; documentation
// constants, not targets.
inline constexpr uint64_t kReferenceTierTokens[3] = {
    4'838'384'488ull, 10'382'663'651ull, 22'616'170'041ull};

TierManifest tier_assign(const CorpusManifest& manifest, Tier tier);

// part / total as a percentage; format with 7 decimal places.
double proportion_pct(uint64_t part_tokens, uint64_t total_tokens);
std::string format_proportion_pct(double pct);

}  // namespace forge
