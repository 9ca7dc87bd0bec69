#include "forge/ingest.hpp"

#include <algorithm>
#include <cctype>

#include "forge/unicode.hpp"

namespace forge {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

char ascii_lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string lower_ext(const std::string& path) {
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  auto slash = path.find_last_of("/\\");
  if (slash != std::string::npos && dot < slash) return "";
  std::string ext = path.substr(dot);
  std::transform(ext.begin(), ext.end(), ext.begin(), ascii_lower);
  return ext;
}

bool mostly_prose(const std::string& text) {
  static const std::string punct = ".,;:'\"!?()-";
  size_t prose = 0, total = 0;
  bool has_letter = false;
  for (char32_t cp : uni::decode_utf8(text)) {
    ++total;
    if (uni::is_letter(cp)) {
      prose++;
      has_letter = true;
    } else if (uni::is_space(cp)) {
      prose++;
    } else if (cp < 0x80 && punct.find(static_cast<char>(cp)) != std::string::npos) {
      prose++;
    }
  }
  if (total == 0 || !has_letter) return false;
  return static_cast<double>(prose) / static_cast<double>(total) >= 0.85;
}

}  // namespace

size_t count_word(const std::string& text, const std::string& word) {
  size_t count = 0;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    if (!is_word_char(text[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && is_word_char(text[j])) ++j;
    if (j - i == word.size()) {
      bool eq = true;
      for (size_t k = 0; k < word.size(); ++k) {
        if (ascii_lower(text[i + k]) != ascii_lower(word[k])) {
          eq = false;
          break;
        }
      }
      if (eq) ++count;
    }
    i = j;
  }
  return count;
}

Lang classify_hdl(const std::string& path, const std::string& text) {
  const std::string ext = lower_ext(path);
  if (ext == ".sv" || ext == ".svh") return Lang::SystemVerilog;
  if (ext == ".v" || ext == ".vh") return Lang::Verilog;
  if (ext == ".vhd" || ext == ".vhdl") return Lang::VHDL;

  const bool has_entity = count_word(text, "entity") > 0;
  const bool has_arch = count_word(text, "architecture") > 0;
  if (has_entity && has_arch) return Lang::VHDL;

  const bool has_module = count_word(text, "module") > 0;
  const bool sv_marker = count_word(text, "class") > 0 ||
                         count_word(text, "interface") > 0 ||
                         count_word(text, "logic") > 0;
  if (has_module && sv_marker) return Lang::SystemVerilog;
  if (has_module && count_word(text, "endmodule") > 0) return Lang::Verilog;

  return mostly_prose(text) ? Lang::NaturalLanguage : Lang::Other;
}

std::vector<Document> scan_source(const SourceSpec& spec, SkipReport& skips) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(spec.root_path, ec))
    throw ForgeError("source root not readable: " + spec.root_path.string());

  std::vector<std::string> rel_paths;
  for (auto it = fs::recursive_directory_iterator(
           spec.root_path, fs::directory_options::skip_permission_denied);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file(ec)) continue;
    rel_paths.push_back(
        fs::relative(it->path(), spec.root_path).generic_string());
  }
  std::sort(rel_paths.begin(), rel_paths.end());

  std::vector<Document> docs;
  docs.reserve(rel_paths.size());
  for (const auto& rel : rel_paths) {
    std::string bytes;
    try {
      bytes = read_file(spec.root_path / rel);
    } catch (const ForgeError&) {
      skips.add("unreadable");
      continue;
    }
    Document d;
    bool ok = false;
    auto cps = uni::decode_utf8(bytes, &ok);
    d.text = ok ? std::move(bytes) : uni::encode_utf8(cps);
    d.utf8_ok = ok;
    d.id = content_id(d.text);
    d.source = spec.name;
    d.category = spec.category;
    d.path = rel;
    d.lang = classify_hdl(rel, d.text);
    d.license = spec.default_license;
    d.byte_len = d.text.size();
    docs.push_back(std::move(d));
  }
  return docs;
}

bool license_filter(const Document& doc,
                    const std::set<std::string>& allowlist) {
  if (!doc.license) return false;
  return allowlist.count(*doc.license) > 0;
}

CleanReport sanity_check(const Document& doc) {
  CleanReport r;
  r.utf8_ok = doc.utf8_ok;
  if (!r.utf8_ok) r.reasons.push_back("invalid utf-8");

  auto first = doc.text.find_first_not_of(" \t\r\n\f\v");
  r.nonempty = first != std::string::npos;
  if (!r.nonempty) r.reasons.push_back("empty");

  r.hdl_balance_ok = true;
  if (doc.lang == Lang::Verilog || doc.lang == Lang::SystemVerilog) {
    if (count_word(doc.text, "module") != count_word(doc.text, "endmodule")) {
      r.hdl_balance_ok = false;
      r.reasons.push_back("unbalanced module/endmodule");
    }
  } else if (doc.lang == Lang::VHDL) {
    if (count_word(doc.text, "entity") >= 1 &&
        count_word(doc.text, "architecture") < 1) {
      r.hdl_balance_ok = false;
      r.reasons.push_back("entity without architecture");
    }
  }

  r.verdict = (r.utf8_ok && r.nonempty && r.hdl_balance_ok)
                  ? CleanReport::Verdict::Pass
                  : CleanReport::Verdict::Fail;
  return r;
}

}  // namespace forge
