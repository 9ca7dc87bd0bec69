#include "forge/unicode.hpp"

#include <random>
#include <set>

#include "doctest.h"
#include "test_support.hpp"

namespace uni = forge::uni;

TEST_CASE("nfc composes combining sequences") {
  CHECK(uni::nfc("e\xcc\x81") == "\xc3\xa9");  // e + U+0301 -> é
  CHECK(uni::nfc("\xc3\xa9") == "\xc3\xa9");   // already NFC
  CHECK(uni::nfc("\xe2\x91\xa0") == "\xe2\x91\xa0");  // ① unchanged (not NFKC)
}

TEST_CASE("nfc matches the reference fixtures") {
  const auto cases = testsup::read_jsonl(testsup::data_dir() / "nfc_cases.jsonl");
  REQUIRE(cases.size() == 2000);
  for (const auto& c : cases) {
    CHECK(uni::nfc(c.at("input").get<std::string>()) ==
          c.at("nfc").get<std::string>());
  }
}

TEST_CASE("nfc is idempotent on random unicode") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<uint32_t> pick(0, 0x2fff);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const size_t n = rng() % 32;
    for (size_t j = 0; j < n; ++j) {
      char32_t cp = pick(rng);
      if (cp >= 0xd800 && cp <= 0xdfff) cp = 0x20;
      uni::append_utf8(s, cp);
    }
    const std::string once = uni::nfc(s);
    CHECK(uni::nfc(once) == once);
  }
}

TEST_CASE("character classes match the reference tokenizer's") {
  const auto j = nlohmann::json::parse(
      forge::read_file(testsup::data_dir() / "char_classes_sample.json"));
  const auto sampled = j.at("sampled").get<std::vector<uint32_t>>();
  std::set<uint32_t> space(j.at("space").begin(), j.at("space").end());
  std::set<uint32_t> letter(j.at("letter").begin(), j.at("letter").end());
  std::set<uint32_t> number(j.at("number").begin(), j.at("number").end());
  for (uint32_t cp : sampled) {
    CAPTURE(cp);
    CHECK(uni::is_space(cp) == (space.count(cp) > 0));
    CHECK(uni::is_letter(cp) == (letter.count(cp) > 0));
    CHECK(uni::is_number(cp) == (number.count(cp) > 0));
  }
}

TEST_CASE("lossy decode flags invalid utf-8") {
  bool ok = true;
  const auto cps = uni::decode_utf8("ab\xff\xfe cd", &ok);
  CHECK_FALSE(ok);
  CHECK(cps.size() == 7);
  CHECK(cps[2] == 0xFFFD);
  CHECK(uni::is_valid_utf8("plain ascii"));
  CHECK(uni::is_valid_utf8("\xc3\xa9"));
  CHECK_FALSE(uni::is_valid_utf8("\xc3"));         // truncated
  CHECK_FALSE(uni::is_valid_utf8("\xed\xa0\x80")); // surrogate
  CHECK_FALSE(uni::is_valid_utf8("\xc0\xaf"));     // overlong
}

TEST_CASE("utf8 round trip") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    std::u32string cps;
    const size_t n = rng() % 24;
    for (size_t j = 0; j < n; ++j) {
      char32_t cp = rng() % 0x110000;
      if (cp >= 0xd800 && cp <= 0xdfff) cp = 0xfffd;
      cps.push_back(cp);
    }
    bool ok = false;
    CHECK(uni::decode_utf8(uni::encode_utf8(cps), &ok) == cps);
    CHECK(ok);
  }
}
