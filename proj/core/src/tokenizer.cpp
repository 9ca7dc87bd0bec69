#include "forge/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "forge/unicode.hpp"
#include "json.hpp"

namespace forge {

namespace {

// GPT-2 byte alphabet: printable bytes map to themselves, the rest to
// codepoints 256+n in order.
std::array<char32_t, 256> byte_alphabet() {
  std::array<char32_t, 256> map{};
  std::array<bool, 256> direct{};
  for (int b = '!'; b <= '~'; ++b) direct[b] = true;
  for (int b = 0xA1; b <= 0xAC; ++b) direct[b] = true;
  for (int b = 0xAE; b <= 0xFF; ++b) direct[b] = true;
  char32_t next = 256;
  for (int b = 0; b < 256; ++b)
    map[b] = direct[b] ? static_cast<char32_t>(b) : next++;
  return map;
}

bool is_other_char(char32_t cp) {
  return !uni::is_space(cp) && !uni::is_letter(cp) && !uni::is_number(cp);
}

}  // namespace

std::vector<std::string> TokenizerModel::pretokenize(const std::string& text) {
  const std::u32string cps = uni::decode_utf8(text);
  std::vector<std::string> out;
  const size_t n = cps.size();
  size_t i = 0;

  auto emit = [&](size_t lo, size_t hi) {
    out.push_back(uni::encode_utf8(
        std::u32string_view(cps.data() + lo, hi - lo)));
  };

  while (i < n) {
    // contraction suffixes: 's 't 're 've 'm 'll 'd
    if (cps[i] == U'\'' && i + 1 < n) {
      const char32_t a = cps[i + 1];
      const char32_t b = (i + 2 < n) ? cps[i + 2] : 0;
      if (a == U's' || a == U't' || a == U'm' || a == U'd') {
        emit(i, i + 2);
        i += 2;
        continue;
      }
      if ((a == U'r' && b == U'e') || (a == U'v' && b == U'e') ||
          (a == U'l' && b == U'l')) {
        emit(i, i + 3);
        i += 3;
        continue;
      }
    }

    // " ?\p{L}+" | " ?\p{N}+" | " ?[^\s\p{L}\p{N}]+"
    const size_t start = i;
    const size_t probe = (cps[i] == U' ' && i + 1 < n) ? i + 1 : i;
    if (probe < n) {
      if (uni::is_letter(cps[probe])) {
        size_t j = probe;
        while (j < n && uni::is_letter(cps[j])) ++j;
        emit(start, j);
        i = j;
        continue;
      }
      if (uni::is_number(cps[probe])) {
        size_t j = probe;
        while (j < n && uni::is_number(cps[j])) ++j;
        emit(start, j);
        i = j;
        continue;
      }
      if (is_other_char(cps[probe])) {
        size_t j = probe;
        while (j < n && is_other_char(cps[j])) ++j;
        emit(start, j);
        i = j;
        continue;
      }
    }

    // "\s+(?!\S)" — whitespace run keeping one char for the next pretoken
    // when non-space follows; otherwise "\s+".
    size_t j = i;
    while (j < n && uni::is_space(cps[j])) ++j;
    if (j < n && j - i > 1) {
      emit(i, j - 1);
      i = j - 1;
    } else if (j < n && j - i == 1) {
      emit(i, j);  // single whitespace before non-space: plain "\s+"
      i = j;
    } else {
      emit(i, j);  // trailing whitespace run
      i = j;
    }
  }
  return out;
}

TokenizerModel TokenizerModel::load(const std::filesystem::path& vocab_file,
                                    const std::filesystem::path& merges_file) {
  using nlohmann::json;
  TokenizerModel m;

  json jv;
  try {
    jv = json::parse(read_file(vocab_file));
  } catch (const json::exception& e) {
    throw ForgeError("vocab file is not a JSON object: " +
                     std::string(e.what()));
  }
  if (!jv.is_object()) throw ForgeError("vocab file is not a JSON object");

  m.vocab_.reserve(jv.size());
  m.id_to_token_.assign(jv.size(), {});
  std::vector<bool> seen(jv.size(), false);
  for (auto& [tok, idj] : jv.items()) {
    if (!idj.is_number_integer())
      throw ForgeError("vocab id for token '" + tok + "' is not an integer");
    const int64_t id = idj.get<int64_t>();
    if (id < 0 || id >= static_cast<int64_t>(jv.size()))
      throw ForgeError("vocab ids are not dense in [0, |vocab|): token '" +
                       tok + "' has id " + std::to_string(id));
    if (seen[id])
      throw ForgeError("duplicate vocab id " + std::to_string(id));
    seen[id] = true;
    m.id_to_token_[id] = tok;
    m.vocab_.emplace(tok, static_cast<uint32_t>(id));
  }

  auto eos_it = m.vocab_.find(kEosToken);
  if (eos_it == m.vocab_.end())
    throw ForgeError(std::string("vocab is missing the EOS entry ") +
                     kEosToken);
  m.eos_id_ = eos_it->second;

  std::ifstream in(merges_file);
  if (!in) throw ForgeError("cannot open merges file: " + merges_file.string());
  std::string line;
  bool first = true;
  uint32_t rank = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && line.rfind("#", 0) == 0) {
      first = false;
      continue;  // version header
    }
    first = false;
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0 || sp + 1 >= line.size())
      throw ForgeError("malformed merge line: '" + line + "'");
    const std::string left = line.substr(0, sp);
    const std::string right = line.substr(sp + 1);
    const std::string result = left + right;
    if (!m.vocab_.count(result))
      throw ForgeError("merge result '" + result + "' is not in the vocab");
    m.merge_ranks_.emplace(left + " " + right, rank++);
  }

  const auto alphabet = byte_alphabet();
  for (int b = 0; b < 256; ++b) {
    std::string s;
    uni::append_utf8(s, alphabet[b]);
    m.byte_to_char_[b] = std::move(s);
    m.char_to_byte_.emplace(alphabet[b], static_cast<uint8_t>(b));
  }
  return m;
}

const std::string& TokenizerModel::token_string(uint32_t id) const {
  if (id >= id_to_token_.size())
    throw ForgeError("token id out of range: " + std::to_string(id));
  return id_to_token_[id];
}

std::vector<std::string> TokenizerModel::bpe(const std::string& mapped) const {
  // symbols start as single (mapped) codepoints
  std::vector<std::string> word;
  {
    const std::u32string cps = uni::decode_utf8(mapped);
    word.reserve(cps.size());
    for (char32_t cp : cps) {
      std::string s;
      uni::append_utf8(s, cp);
      word.push_back(std::move(s));
    }
  }

  while (word.size() > 1) {
    uint32_t best_rank = std::numeric_limits<uint32_t>::max();
    size_t best_i = 0;
    for (size_t i = 0; i + 1 < word.size(); ++i) {
      auto it = merge_ranks_.find(word[i] + " " + word[i + 1]);
      if (it != merge_ranks_.end() && it->second < best_rank) {
        best_rank = it->second;
        best_i = i;
      }
    }
    if (best_rank == std::numeric_limits<uint32_t>::max()) break;

    // merge every occurrence of the chosen bigram, left to right
    const std::string first = word[best_i];
    const std::string second = word[best_i + 1];
    std::vector<std::string> next;
    next.reserve(word.size());
    size_t i = 0;
    while (i < word.size()) {
      if (i + 1 < word.size() && word[i] == first && word[i + 1] == second) {
        next.push_back(first + second);
        i += 2;
      } else {
        next.push_back(word[i]);
        ++i;
      }
    }
    word = std::move(next);
  }
  return word;
}

std::vector<uint32_t> TokenizerModel::encode(const std::string& text) const {
  std::vector<uint32_t> ids;
  for (const std::string& pretoken : pretokenize(text)) {
    std::string mapped;
    mapped.reserve(pretoken.size() * 2);
    for (unsigned char b : pretoken) mapped += byte_to_char_[b];
    for (const std::string& piece : bpe(mapped)) {
      auto it = vocab_.find(piece);
      if (it == vocab_.end())
        throw ForgeError("BPE produced a piece missing from the vocab: '" +
                         piece + "'");
      ids.push_back(it->second);
    }
  }
  return ids;
}

std::string TokenizerModel::decode(const std::vector<uint32_t>& ids,
                                   bool* replaced) const {
  std::string bytes;
  for (uint32_t id : ids) {
    const std::string& tok = token_string(id);
    for (char32_t cp : uni::decode_utf8(tok)) {
      auto it = char_to_byte_.find(cp);
      if (it == char_to_byte_.end())
        throw ForgeError("token char not in byte alphabet");
      bytes.push_back(static_cast<char>(it->second));
    }
  }
  bool ok = false;
  auto cps = uni::decode_utf8(bytes, &ok);
  if (replaced) *replaced = !ok;
  return ok ? bytes : uni::encode_utf8(cps);
}

std::vector<uint32_t> TokenizerModel::append_eos(
    std::vector<uint32_t> ids) const {
  ids.push_back(eos_id_);
  return ids;
}

double words_per_token(const std::vector<Document>& corpus,
                       const TokenizerModel& m) {
  if (corpus.empty()) throw ForgeError("words_per_token on empty corpus");
  uint64_t words = 0, tokens = 0;
  for (const auto& doc : corpus) {
    bool in_word = false;
    for (unsigned char c : doc.text) {
      const bool space = std::isspace(c) != 0;
      if (!space && !in_word) ++words;
      in_word = !space;
    }
    tokens += m.encode(doc.text).size();
  }
  if (tokens == 0) throw ForgeError("words_per_token: corpus has no tokens");
  return static_cast<double>(words) / static_cast<double>(tokens);
}

}  // namespace forge
