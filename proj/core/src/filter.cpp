#include "forge/filter.hpp"

#include <cctype>

#include "forge/unicode.hpp"

namespace forge {

namespace {

bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::string strip_controls(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : uni::decode_utf8(text)) {
    if (uni::is_control(cp) && cp != U'\n' && cp != U'\t') continue;
    uni::append_utf8(out, cp);
  }
  return out;
}

// Collapse [ \t]+ runs to a single space and trim the line ends.
std::string normalize_line(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  bool in_ws = false;
  for (char c : line) {
    if (c == ' ' || c == '\t') {
      in_ws = true;
      continue;
    }
    if (in_ws && !out.empty()) out.push_back(' ');
    in_ws = false;
    out.push_back(c);
  }
  return out;
}

std::string collapse_punct_runs(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (is_ascii_punct(c)) {
      size_t j = i;
      while (j < text.size() && text[j] == c) ++j;
      if (j - i >= 4)
        out.push_back(c);
      else
        out.append(text, i, j - i);
      i = j;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

}  // namespace

void FilterConfig::validate() const {
  if (min_keyword_hits < 1) throw ForgeError("min_keyword_hits must be >= 1");
  if (min_chars < 1) throw ForgeError("min_chars must be >= 1");
  if (!categories_subject_to_keywords.empty() && keywords.empty())
    throw ForgeError("keyword filtering enabled but keyword list is empty");
}

std::string to_string(FilterVerdict::Stage s) {
  switch (s) {
    case FilterVerdict::Stage::Keyword: return "Keyword";
    case FilterVerdict::Stage::Short: return "Short";
    case FilterVerdict::Stage::None: return "None";
  }
  throw ForgeError("bad stage");
}

std::string normalize_nfc(const std::string& text) { return uni::nfc(text); }

size_t keyword_relevance(const std::string& text,
                         const std::set<std::string>& keywords) {
  size_t hits = 0;
  const size_t n = text.size();
  size_t i = 0;
  std::string word;
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (!std::isalnum(c)) {
      ++i;
      continue;
    }
    word.clear();
    size_t j = i;
    while (j < n && std::isalnum(static_cast<unsigned char>(text[j]))) {
      word.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(text[j]))));
      ++j;
    }
    if (keywords.count(word)) ++hits;
    i = j;
  }
  return hits;
}

std::string scrub(const std::string& text, bool is_code, bool scrub_nl_punct) {
  const std::string stripped = strip_controls(text);

  // per-line whitespace normalization
  std::string joined;
  joined.reserve(stripped.size());
  size_t start = 0;
  while (start <= stripped.size()) {
    size_t nl = stripped.find('\n', start);
    const size_t end = (nl == std::string::npos) ? stripped.size() : nl;
    joined += normalize_line(
        std::string_view(stripped).substr(start, end - start));
    if (nl == std::string::npos) break;
    joined.push_back('\n');
    start = nl + 1;
  }

  // collapse 3+ newlines to exactly 2
  std::string collapsed;
  collapsed.reserve(joined.size());
  size_t i = 0;
  while (i < joined.size()) {
    if (joined[i] == '\n') {
      size_t j = i;
      while (j < joined.size() && joined[j] == '\n') ++j;
      collapsed.append(std::min<size_t>(j - i, 2), '\n');
      i = j;
    } else {
      collapsed.push_back(joined[i]);
      ++i;
    }
  }

  // trim the document
  const auto first = collapsed.find_first_not_of(" \t\n");
  const auto last = collapsed.find_last_not_of(" \t\n");
  std::string doc = (first == std::string::npos)
                        ? std::string()
                        : collapsed.substr(first, last - first + 1);

  if (!is_code && scrub_nl_punct) doc = collapse_punct_runs(doc);
  return doc;
}

std::pair<std::optional<Document>, FilterVerdict> filter_pipeline(
    const Document& doc, const FilterConfig& cfg) {
  FilterVerdict v;
  Document out = doc;
  out.text = scrub(normalize_nfc(doc.text), doc.is_code(), cfg.scrub_nl_punct);

  if (uni::codepoint_count(out.text) < cfg.min_chars) {
    v.kept = false;
    v.stage = FilterVerdict::Stage::Short;
    return {std::nullopt, v};
  }

  if (cfg.categories_subject_to_keywords.count(doc.category)) {
    v.keyword_hits = keyword_relevance(out.text, cfg.keywords);
    if (v.keyword_hits < cfg.min_keyword_hits) {
      v.kept = false;
      v.stage = FilterVerdict::Stage::Keyword;
      return {std::nullopt, v};
    }
  }

  v.kept = true;
  v.stage = FilterVerdict::Stage::None;
  out.id = content_id(out.text);  // id stays the hash of the current text
  out.byte_len = out.text.size();
  return {std::move(out), v};
}

}  // namespace forge
