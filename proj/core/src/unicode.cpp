#include "forge/unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utypes.h>

#include "forge/util.hpp"

namespace forge::uni {

namespace {
constexpr char32_t kReplacement = 0xFFFD;
}

std::u32string decode_utf8(std::string_view bytes, bool* ok) {
  std::u32string out;
  out.reserve(bytes.size());
  bool valid = true;
  size_t i = 0;
  const auto n = bytes.size();
  auto byte = [&](size_t j) { return static_cast<unsigned char>(bytes[j]); };
  while (i < n) {
    const unsigned char b0 = byte(i);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4; cp = b0 & 0x07; min = 0x10000;
    } else {
      out.push_back(kReplacement);
      valid = false;
      ++i;
      continue;
    }
    if (i + len > n) {
      out.push_back(kReplacement);
      valid = false;
      ++i;
      continue;
    }
    bool cont_ok = true;
    for (int k = 1; k < len; ++k) {
      if ((byte(i + k) & 0xC0) != 0x80) { cont_ok = false; break; }
      cp = (cp << 6) | (byte(i + k) & 0x3F);
    }
    if (!cont_ok || cp < min || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      valid = false;
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  if (ok) *ok = valid;
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

size_t codepoint_count(std::string_view utf8) {
  size_t n = 0;
  for (unsigned char c : utf8)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

bool is_valid_utf8(std::string_view bytes) {
  bool ok = false;
  decode_utf8(bytes, &ok);
  return ok;
}

std::string nfc(std::string_view utf8) {
  UErrorCode err = U_ZERO_ERROR;
  const UNormalizer2* norm = unorm2_getNFCInstance(&err);
  if (U_FAILURE(err)) throw ForgeError("ICU NFC instance unavailable");

  // UTF-8 -> UTF-16
  int32_t ulen = 0;
  err = U_ZERO_ERROR;
  u_strFromUTF8(nullptr, 0, &ulen, utf8.data(),
                static_cast<int32_t>(utf8.size()), &err);
  if (err != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(err))
    throw ForgeError("invalid UTF-8 passed to nfc()");
  std::vector<UChar> u16(static_cast<size_t>(ulen) + 1);
  err = U_ZERO_ERROR;
  u_strFromUTF8(u16.data(), static_cast<int32_t>(u16.size()), &ulen,
                utf8.data(), static_cast<int32_t>(utf8.size()), &err);
  if (U_FAILURE(err)) throw ForgeError("invalid UTF-8 passed to nfc()");

  err = U_ZERO_ERROR;
  int32_t nlen =
      unorm2_normalize(norm, u16.data(), ulen, nullptr, 0, &err);
  if (err != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(err))
    throw ForgeError("NFC normalization failed");
  std::vector<UChar> out16(static_cast<size_t>(nlen) + 1);
  err = U_ZERO_ERROR;
  unorm2_normalize(norm, u16.data(), ulen, out16.data(),
                   static_cast<int32_t>(out16.size()), &err);
  if (U_FAILURE(err)) throw ForgeError("NFC normalization failed");

  // UTF-16 -> UTF-8
  int32_t blen = 0;
  err = U_ZERO_ERROR;
  u_strToUTF8(nullptr, 0, &blen, out16.data(), nlen, &err);
  if (err != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(err))
    throw ForgeError("NFC re-encode failed");
  std::string out(static_cast<size_t>(blen), '\0');
  err = U_ZERO_ERROR;
  u_strToUTF8(out.data(), blen, &blen, out16.data(), nlen, &err);
  if (U_FAILURE(err)) throw ForgeError("NFC re-encode failed");
  return out;
}

bool is_letter(char32_t cp) {
  switch (u_charType(static_cast<UChar32>(cp))) {
    case U_UPPERCASE_LETTER:
    case U_LOWERCASE_LETTER:
    case U_TITLECASE_LETTER:
    case U_MODIFIER_LETTER:
    case U_OTHER_LETTER:
      return true;
    default:
      return false;
  }
}

bool is_number(char32_t cp) {
  switch (u_charType(static_cast<UChar32>(cp))) {
    case U_DECIMAL_DIGIT_NUMBER:
    case U_LETTER_NUMBER:
    case U_OTHER_NUMBER:
      return true;
    default:
      return false;
  }
}

bool is_space(char32_t cp) {
  // \s of the reference tokenizer's regex engine: the White_Space property.
  return u_hasBinaryProperty(static_cast<UChar32>(cp), UCHAR_WHITE_SPACE);
}

bool is_control(char32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_CONTROL_CHAR;
}

}  // namespace forge::uni
