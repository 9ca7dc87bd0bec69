#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "forge/document.hpp"

namespace forge {

struct ShingleSet {
  DocId doc_id{};
  std::vector<uint64_t> shingles;  // sorted, unique
  size_t w = 0;
};

struct MinHashSignature {
  DocId doc_id{};
  std::vector<uint64_t> values;
  size_t k = 0;
  uint64_t seed = 0;
};

struct LshParams {
  size_t k = 128;
  double threshold = 0.8;
  size_t bands = 0;  // 0 -> derived from (k, threshold)
  size_t rows = 0;
  size_t shingle_width = 5;
  uint64_t seed = 0;
};

struct DupCluster {
  std::vector<DocId> members;  // sorted
  DocId canonical{};
};

struct DedupReport {
  uint64_t input = 0;
  uint64_t exact_dropped = 0;
  uint64_t near_dropped = 0;
  uint64_t clusters = 0;
};

// Keeps the first document per distinct content hash of its text.
std::pair<std::vector<Document>, uint64_t> exact_dedup(
    const std::vector<Document>& docs);

// Lowercased word w-grams hashed to 64 bits; short texts yield a single
// whole-text shingle. Empty text is an error.
ShingleSet shingle_set(const Document& doc, size_t w);
ShingleSet shingle_set(DocId id, const std::string& text, size_t w);

// values[i] = min over shingles of (a_i*x + b_i) mod (2^61 - 1), with the
// (a_i, b_i) stream drawn deterministically from the seed.
MinHashSignature minhash_sign(const ShingleSet& s, size_t k, uint64_t seed);

// Fraction of agreeing components; signatures must share k and seed.
double est_jaccard(const MinHashSignature& a, const MinHashSignature& b);

// Exact Jaccard over sorted shingle vectors (used for reporting and tests).
double exact_jaccard(const ShingleSet& a, const ShingleSet& b);

// Minimizes the false-positive + false-negative integrals of the banding
// S-curve 1-(1-s^r)^b against the step at `threshold` over all b*r <= k.
std::pair<size_t, size_t> choose_lsh_params(size_t k, double threshold);

struct NearDedupResult {
  std::vector<Document> kept;
  std::vector<DupCluster> clusters;
  std::vector<MinHashSignature> signatures;  // one per input doc
  uint64_t near_dropped = 0;
};

// Input must already be exact-deduped. Banding proposes candidate pairs,
// est_jaccard >= threshold confirms, union-find clusters; the canonical
// member (longest text, ties to smallest id) survives.
NearDedupResult near_dedup(const std::vector<Document>& docs,
                           const LshParams& params);

void write_signatures(const std::filesystem::path& p,
                      const std::vector<MinHashSignature>& sigs);
std::vector<MinHashSignature> read_signatures(const std::filesystem::path& p,
                                              size_t k, uint64_t seed);

}  // namespace forge
