#pragma once

#include "forge/config.hpp"
#include "json.hpp"

namespace forge {

// Stage runners read the previous stage's declared outputs from the
// workspace and write their own, plus a provenance record (config hash,
// input hashes, tool version). Each returns a summary for logging.

nlohmann::json run_ingest(const PipelineConfig& cfg);
nlohmann::json run_filter(const PipelineConfig& cfg);
nlohmann::json run_dedup(const PipelineConfig& cfg);
nlohmann::json run_tokenize(const PipelineConfig& cfg);
nlohmann::json run_pack(const PipelineConfig& cfg);
nlohmann::json run_train(const PipelineConfig& cfg);
nlohmann::json run_generate(const PipelineConfig& cfg,
                            const std::string& prompt_override = {});
nlohmann::json run_report(const PipelineConfig& cfg);
nlohmann::json run_stats(const PipelineConfig& cfg);  // report JSON, no files
nlohmann::json run_all(const PipelineConfig& cfg);

inline constexpr const char* kForgeVersion = "0.1.0";

}  // namespace forge
