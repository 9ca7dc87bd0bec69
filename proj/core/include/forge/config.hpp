#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "forge/dedup.hpp"
#include "forge/filter.hpp"
#include "forge/pack.hpp"
#include "forge/trainer.hpp"
#include "json.hpp"

namespace forge {

// Config validation failure; carries one message per offending field.
struct ConfigError : ForgeError {
  explicit ConfigError(std::vector<std::string> errs)
      : ForgeError(join(errs)), errors(std::move(errs)) {}
  std::vector<std::string> errors;

 private:
  static std::string join(const std::vector<std::string>& errs) {
    std::string out = "invalid configuration:";
    for (const auto& e : errs) out += "\n  " + e;
    return out;
  }
};

struct IngestConfig {
  std::vector<SourceSpec> sources;
  std::set<std::string> license_allowlist;
};

struct DedupConfig {
  size_t num_permutations = 128;
  double threshold = 0.8;
  size_t shingle_width = 5;
};

struct TokenizerPaths {
  std::filesystem::path vocab_file;
  std::filesystem::path merges_file;
};

struct PackStageConfig {
  PackConfig pack;
  Tier tier = Tier::Large;
  bool shuffle_docs = false;
};

struct TrainerStageConfig {
  double val_fraction = 0.005;
  std::string sample_prompt = "module ";
  size_t sample_max_new = 32;
  double sample_temperature = 0.0;
  size_t sample_top_k = 0;
  std::optional<std::filesystem::path> resume_from;
};

struct EmissionsInputs {
  double avg_power_kw = 0;
  double hours = 0;
  double pue = 1.1;
  double carbon_intensity_kg_per_kwh = 0;
};

struct PipelineConfig {
  std::filesystem::path workspace_dir;
  uint64_t seed = 0;
  IngestConfig ingest;
  FilterConfig filter;
  DedupConfig dedup;
  TokenizerPaths tokenizer;
  PackStageConfig pack_stage;
  nn::ModelConfig model;
  OptimizerConfig optimizer;
  TrainSchedule schedule;
  TrainerStageConfig trainer;
  std::optional<EmissionsInputs> emissions;

  std::string config_hash;  // sha256 of the canonical JSON

  // Parses and validates; throws ConfigError naming every bad field.
  // Relative paths resolve against base_dir; workspace_dir falls back to the
  // FORGE_WORKSPACE environment variable.
  static PipelineConfig load(const nlohmann::json& j,
                             const std::filesystem::path& base_dir);
  static PipelineConfig load_file(
      const std::filesystem::path& config_path,
      const std::vector<std::string>& overrides = {});
};

// Applies one `dotted.path=value` override onto a JSON document; the value
// text is parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace forge
