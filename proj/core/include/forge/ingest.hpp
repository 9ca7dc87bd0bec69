#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "forge/document.hpp"

namespace forge {

struct CleanReport {
  bool utf8_ok = false;
  bool nonempty = false;
  bool hdl_balance_ok = false;
  enum class Verdict { Pass, Fail } verdict = Verdict::Fail;
  std::vector<std::string> reasons;
};

struct SkipReport {
  uint64_t skipped = 0;
  std::map<std::string, uint64_t> reasons;

  void add(const std::string& reason) {
    ++skipped;
    ++reasons[reason];
  }
};

// One Document per regular file under spec.root_path, ordered by relative
// path. Files that do not decode as UTF-8 are decoded lossily and flagged so
// sanity_check fails them; unreadable files are skipped and counted.
std::vector<Document> scan_source(const SourceSpec& spec, SkipReport& skips);

// Extension rules first, then content keywords, then a prose heuristic.
Lang classify_hdl(const std::string& path, const std::string& text);

// Keep iff the document's license (already defaulted from its source) is in
// the allowlist. No license information means drop.
bool license_filter(const Document& doc,
                    const std::set<std::string>& allowlist);

CleanReport sanity_check(const Document& doc);

// Whole-word, case-insensitive occurrence count (ASCII folding). Words are
// maximal [A-Za-z0-9_] runs.
size_t count_word(const std::string& text, const std::string& word);

}  // namespace forge
