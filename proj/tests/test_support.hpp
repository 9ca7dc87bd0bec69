#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "forge/util.hpp"
#include "json.hpp"

#ifndef FORGE_SOURCE_DIR
#error "FORGE_SOURCE_DIR must be defined by the build"
#endif

namespace testsup {

inline std::filesystem::path source_dir() { return FORGE_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "tests/data"; }
inline std::filesystem::path gpt2_vocab() { return data_dir() / "gpt2/vocab.json"; }
inline std::filesystem::path gpt2_merges() { return data_dir() / "gpt2/merges.txt"; }
inline std::filesystem::path demo_dir() { return source_dir() / "data/demo"; }

inline std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw forge::ForgeError("missing fixture: " + p.string());
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

// Scratch directory, unique per test binary run, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("forge_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace testsup
