#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace forge::uni {

// Decodes UTF-8; invalid sequences become U+FFFD and clear *ok.
std::u32string decode_utf8(std::string_view bytes, bool* ok = nullptr);
std::string encode_utf8(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

size_t codepoint_count(std::string_view utf8);
bool is_valid_utf8(std::string_view bytes);

// Unicode NFC (canonical composition), ICU-backed. Input must be valid UTF-8.
std::string nfc(std::string_view utf8);

// Character classes matching the reference tokenizer's \p{L}, \p{N}, \s.
bool is_letter(char32_t cp);
bool is_number(char32_t cp);
bool is_space(char32_t cp);
bool is_control(char32_t cp);  // general category Cc

}  // namespace forge::uni
