#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/document.hpp"

namespace forge {

// Byte-level BPE model in the published GPT-2 file format: a JSON vocab map
// and a line-oriented merges file. Immutable after load; encode/decode are
// pure and safe to share across threads.
class TokenizerModel {
 public:
  static TokenizerModel load(const std::filesystem::path& vocab_file,
                             const std::filesystem::path& merges_file);

  size_t vocab_size() const { return id_to_token_.size(); }
  uint32_t eos_id() const { return eos_id_; }
  const std::string& token_string(uint32_t id) const;

  std::vector<uint32_t> encode(const std::string& text) const;

  // Inverts the byte alphabet; invalid UTF-8 after inversion becomes U+FFFD
  // and sets *replaced.
  std::string decode(const std::vector<uint32_t>& ids,
                     bool* replaced = nullptr) const;

  std::vector<uint32_t> append_eos(std::vector<uint32_t> ids) const;

  // Splits text with the standard byte-level BPE pretokenization pattern
  // (exposed for tests).
  static std::vector<std::string> pretokenize(const std::string& text);

 private:
  TokenizerModel() = default;

  std::vector<std::string> bpe(const std::string& mapped) const;

  std::unordered_map<std::string, uint32_t> vocab_;
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, uint32_t> merge_ranks_;  // "left right"
  std::array<std::string, 256> byte_to_char_;
  std::unordered_map<char32_t, uint8_t> char_to_byte_;
  uint32_t eos_id_ = 0;
};

inline constexpr const char* kEosToken = "<|endoftext|>";

// Whitespace-delimited words divided by total tokens, EOS excluded.
double words_per_token(const std::vector<Document>& corpus,
                       const TokenizerModel& m);

}  // namespace forge
