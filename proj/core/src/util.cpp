#include "forge/util.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace forge {

std::array<uint8_t, 32> sha256(std::string_view data) {
  std::array<uint8_t, 32> out{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
  return out;
}

DocId content_id(std::string_view text) {
  auto full = sha256(text);
  DocId id{};
  std::copy(full.begin(), full.begin() + 16, id.begin());
  return id;
}

std::string to_hex(const uint8_t* data, size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(n * 2);
  for (size_t i = 0; i < n; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xf]);
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  auto h = sha256(data);
  return to_hex(h.data(), h.size());
}

std::string doc_id_hex(const DocId& id) { return to_hex(id.data(), id.size()); }

DocId doc_id_from_hex(std::string_view hex) {
  if (hex.size() != 32) throw ForgeError("doc id hex must be 32 chars");
  DocId id{};
  auto nib = [](char c) -> uint8_t {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ForgeError("invalid hex digit in doc id");
  };
  for (size_t i = 0; i < 16; ++i)
    id[i] = static_cast<uint8_t>((nib(hex[2 * i]) << 4) | nib(hex[2 * i + 1]));
  return id;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ForgeError("cannot open file: " + p.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw ForgeError("read failed: " + p.string());
  return data;
}

void write_file(const std::filesystem::path& p, std::string_view data) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ForgeError("cannot open file for write: " + p.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw ForgeError("write failed: " + p.string());
}

}  // namespace forge
