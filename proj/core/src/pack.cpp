#include "forge/pack.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace forge {

std::vector<uint32_t> concat_stream(const std::vector<Document>& docs,
                                    const TokenizerModel& m) {
  std::vector<uint32_t> stream;
  for (const auto& doc : docs) {
    auto ids = m.encode(doc.text);
    stream.insert(stream.end(), ids.begin(), ids.end());
    stream.push_back(m.eos_id());
  }
  return stream;
}

void shuffle_documents(std::vector<Document>& docs, uint64_t seed) {
  Rng rng(seed);
  for (size_t i = docs.size(); i > 1; --i)
    std::swap(docs[i - 1], docs[rng.below(i)]);
}

PackResult pack(const std::vector<uint32_t>& stream, const PackConfig& cfg) {
  cfg.validate();
  const size_t T = cfg.context_length;
  const size_t B = cfg.batch_rows;
  const size_t stride = T + 1;
  const size_t L = stream.size();

  PackResult res;
  const size_t num_rows = (L >= stride) ? (L - 1) / T : 0;
  res.dropped_tail = (num_rows > 0) ? L - (num_rows * T + 1) : L;

  size_t row = 0;
  size_t batch_index = 0;
  while (row < num_rows) {
    const size_t rows_here = std::min(B, num_rows - row);
    PackedBatch batch;
    batch.batch_index = batch_index++;
    batch.rows = rows_here;
    batch.row_stride = stride;
    batch.data.resize(rows_here * stride);
    for (size_t r = 0; r < rows_here; ++r) {
      const size_t offset = (row + r) * T;
      std::copy(stream.begin() + offset, stream.begin() + offset + stride,
                batch.data.begin() + r * stride);
    }
    row += rows_here;
    res.batches.push_back(std::move(batch));
  }
  res.last_batch_rows = res.batches.empty() ? 0 : res.batches.back().rows;
  return res;
}

namespace {

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}
void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
uint16_t get_u16(const std::string& s, size_t off) {
  return static_cast<uint16_t>(static_cast<uint8_t>(s[off]) |
                               (static_cast<uint8_t>(s[off + 1]) << 8));
}
uint32_t get_u32(const std::string& s, size_t off) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<uint8_t>(s[off + i]);
  return v;
}

}  // namespace

void write_hpkb(const std::filesystem::path& p, const PackResult& result,
                const PackConfig& cfg, size_t vocab_size) {
  const uint8_t id_width = vocab_size <= 65536 ? 2 : 4;
  std::string out;
  out += "HPKB";
  put_u16(out, 1);  // version
  put_u32(out, static_cast<uint32_t>(cfg.batch_rows));
  put_u32(out, static_cast<uint32_t>(cfg.context_length));
  out.push_back(static_cast<char>(id_width));
  for (const auto& batch : result.batches) {
    for (uint32_t id : batch.data) {
      if (id_width == 2) {
        put_u16(out, static_cast<uint16_t>(id));
      } else {
        put_u32(out, id);
      }
    }
  }
  write_file(p, out);
}

PackResult read_hpkb(const std::filesystem::path& p, PackConfig* cfg_out) {
  const std::string data = read_file(p);
  if (data.size() < 15 || data.compare(0, 4, "HPKB") != 0)
    throw ForgeError("not an HPKB file: " + p.string());
  const uint16_t version = get_u16(data, 4);
  if (version != 1) throw ForgeError("unsupported HPKB version");
  PackConfig cfg;
  cfg.batch_rows = get_u32(data, 6);
  cfg.context_length = get_u32(data, 10);
  const uint8_t id_width = static_cast<uint8_t>(data[14]);
  if (id_width != 2 && id_width != 4)
    throw ForgeError("invalid HPKB id width");
  cfg.validate();

  const size_t stride = cfg.context_length + 1;
  const size_t payload = data.size() - 15;
  if (payload % (stride * id_width) != 0)
    throw ForgeError("HPKB payload is not a whole number of rows");
  const size_t num_rows = payload / (stride * id_width);

  PackResult res;
  size_t off = 15;
  size_t row = 0;
  size_t batch_index = 0;
  while (row < num_rows) {
    const size_t rows_here = std::min(cfg.batch_rows, num_rows - row);
    PackedBatch batch;
    batch.batch_index = batch_index++;
    batch.rows = rows_here;
    batch.row_stride = stride;
    batch.data.reserve(rows_here * stride);
    for (size_t x = 0; x < rows_here * stride; ++x) {
      uint32_t id = (id_width == 2) ? get_u16(data, off) : get_u32(data, off);
      off += id_width;
      batch.data.push_back(id);
    }
    row += rows_here;
    res.batches.push_back(std::move(batch));
  }
  res.last_batch_rows = res.batches.empty() ? 0 : res.batches.back().rows;
  if (cfg_out) *cfg_out = cfg;
  return res;
}

std::string to_string(Tier t) {
  switch (t) {
    case Tier::Small: return "Small";
    case Tier::Medium: return "Medium";
    case Tier::Large: return "Large";
  }
  throw ForgeError("bad tier");
}

Tier tier_from_string(const std::string& s) {
  if (s == "Small") return Tier::Small;
  if (s == "Medium") return Tier::Medium;
  if (s == "Large") return Tier::Large;
  throw ForgeError("unknown tier: " + s);
}

std::set<SourceCategory> tier_categories(Tier t) {
  std::set<SourceCategory> cats = {SourceCategory::HdlCode,
                                   SourceCategory::SecurityKnowledge};
  if (t == Tier::Small) return cats;
  cats.insert(SourceCategory::CuratedNL);
  if (t == Tier::Medium) return cats;
  cats.insert(SourceCategory::WebNL);
  return cats;
}

TierManifest tier_assign(const CorpusManifest& manifest, Tier tier) {
  TierManifest out;
  out.tier = tier;
  out.member_categories = tier_categories(tier);
  for (const auto& [source, account] : manifest) {
    if (!out.member_categories.count(account.category)) continue;
    out.per_source_tokens[source] = account.tokens;
    out.token_total += account.tokens;
  }
  return out;
}

double proportion_pct(uint64_t part_tokens, uint64_t total_tokens) {
  if (total_tokens == 0) throw ForgeError("proportion with zero total");
  return 100.0 * static_cast<double>(part_tokens) /
         static_cast<double>(total_tokens);
}

std::string format_proportion_pct(double pct) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.7f%%", pct);
  return buf;
}

}  // namespace forge
