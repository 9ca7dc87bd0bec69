#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "forge/util.hpp"

namespace forge {

enum class SourceCategory { HdlCode, SecurityKnowledge, CuratedNL, WebNL };
enum class Lang { Verilog, SystemVerilog, VHDL, NaturalLanguage, Other };

std::string to_string(SourceCategory c);
std::string to_string(Lang l);
SourceCategory category_from_string(const std::string& s);
Lang lang_from_string(const std::string& s);

struct SourceSpec {
  std::string name;
  std::filesystem::path root_path;
  SourceCategory category = SourceCategory::HdlCode;
  std::optional<std::string> default_license;
};

// A unit of corpus text. The same struct flows through the whole pipeline;
// stages downstream of ingest only ever see documents that passed the
// sanity checks ("clean" documents).
struct Document {
  DocId id{};
  std::string source;  // SourceSpec name
  SourceCategory category = SourceCategory::HdlCode;
  std::string path;  // relative to the source root
  std::string text;
  Lang lang = Lang::Other;
  std::optional<std::string> license;
  uint64_t byte_len = 0;
  bool utf8_ok = true;

  bool is_code() const {
    return lang == Lang::Verilog || lang == Lang::SystemVerilog ||
           lang == Lang::VHDL;
  }
};

// JSONL round-trip for the inter-stage document schema:
// {id, source, source_category, path, lang, license, text}
std::string document_to_jsonl(const Document& d);
Document document_from_jsonl(const std::string& line);
void write_documents_jsonl(const std::filesystem::path& p,
                           const std::vector<Document>& docs);
std::vector<Document> read_documents_jsonl(const std::filesystem::path& p);

}  // namespace forge
