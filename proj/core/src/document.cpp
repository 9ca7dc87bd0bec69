#include "forge/document.hpp"

#include <fstream>

#include "json.hpp"

namespace forge {

using nlohmann::json;

std::string to_string(SourceCategory c) {
  switch (c) {
    case SourceCategory::HdlCode: return "HdlCode";
    case SourceCategory::SecurityKnowledge: return "SecurityKnowledge";
    case SourceCategory::CuratedNL: return "CuratedNL";
    case SourceCategory::WebNL: return "WebNL";
  }
  throw ForgeError("bad SourceCategory");
}

SourceCategory category_from_string(const std::string& s) {
  if (s == "HdlCode") return SourceCategory::HdlCode;
  if (s == "SecurityKnowledge") return SourceCategory::SecurityKnowledge;
  if (s == "CuratedNL") return SourceCategory::CuratedNL;
  if (s == "WebNL") return SourceCategory::WebNL;
  throw ForgeError("unknown source category: " + s);
}

std::string to_string(Lang l) {
  switch (l) {
    case Lang::Verilog: return "Verilog";
    case Lang::SystemVerilog: return "SystemVerilog";
    case Lang::VHDL: return "VHDL";
    case Lang::NaturalLanguage: return "NaturalLanguage";
    case Lang::Other: return "Other";
  }
  throw ForgeError("bad Lang");
}

Lang lang_from_string(const std::string& s) {
  if (s == "Verilog") return Lang::Verilog;
  if (s == "SystemVerilog") return Lang::SystemVerilog;
  if (s == "VHDL") return Lang::VHDL;
  if (s == "NaturalLanguage") return Lang::NaturalLanguage;
  if (s == "Other") return Lang::Other;
  throw ForgeError("unknown lang: " + s);
}

std::string document_to_jsonl(const Document& d) {
  json j;
  j["id"] = doc_id_hex(d.id);
  j["source"] = d.source;
  j["source_category"] = to_string(d.category);
  j["path"] = d.path;
  j["lang"] = to_string(d.lang);
  if (d.license)
    j["license"] = *d.license;
  else
    j["license"] = nullptr;
  j["text"] = d.text;
  return j.dump();
}

Document document_from_jsonl(const std::string& line) {
  json j = json::parse(line);
  Document d;
  d.id = doc_id_from_hex(j.at("id").get<std::string>());
  d.source = j.at("source").get<std::string>();
  d.category = category_from_string(j.at("source_category").get<std::string>());
  d.path = j.at("path").get<std::string>();
  d.lang = lang_from_string(j.at("lang").get<std::string>());
  if (!j.at("license").is_null())
    d.license = j.at("license").get<std::string>();
  d.text = j.at("text").get<std::string>();
  d.byte_len = d.text.size();
  return d;
}

void write_documents_jsonl(const std::filesystem::path& p,
                           const std::vector<Document>& docs) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ForgeError("cannot open for write: " + p.string());
  for (const auto& d : docs) out << document_to_jsonl(d) << '\n';
  if (!out) throw ForgeError("write failed: " + p.string());
}

std::vector<Document> read_documents_jsonl(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ForgeError("cannot open: " + p.string());
  std::vector<Document> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    docs.push_back(document_from_jsonl(line));
  }
  return docs;
}

}  // namespace forge
