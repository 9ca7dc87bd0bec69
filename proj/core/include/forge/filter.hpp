#pragma once

#include <optional>
#include <set>
#include <string>

#include "forge/document.hpp"

namespace forge {

struct FilterConfig {
  std::set<std::string> keywords;  // lowercase
  size_t min_keyword_hits = 3;
  size_t min_chars = 200;
  bool scrub_nl_punct = true;
  std::set<SourceCategory> categories_subject_to_keywords = {
      SourceCategory::CuratedNL, SourceCategory::WebNL};

  void validate() const;
};

struct FilterVerdict {
  bool kept = false;
  enum class Stage { Keyword, Short, None } stage = Stage::None;
  size_t keyword_hits = 0;
};

std::string to_string(FilterVerdict::Stage s);

// Unicode NFC; idempotent.
std::string normalize_nfc(const std::string& text);

// Total whole-word, case-insensitive hits over all keywords.
size_t keyword_relevance(const std::string& text,
                         const std::set<std::string>& keywords);

// Always: strip control chars (except \n, \t), collapse space/tab runs to one
// space, collapse 3+ newlines to 2, trim each line and the document. NL text
// additionally collapses runs of 4+ identical punctuation marks to one.
std::string scrub(const std::string& text, bool is_code, bool scrub_nl_punct);

// normalize -> scrub -> short filter -> keyword filter (exempt categories
// skip the keyword stage). Returns the transformed document when kept.
std::pair<std::optional<Document>, FilterVerdict> filter_pipeline(
    const Document& doc, const FilterConfig& cfg);

}  // namespace forge
