#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "forge/config.hpp"
#include "json.hpp"

namespace forge {

// kg CO2e = avg_power_kw * hours * pue * carbon_intensity_kg_per_kwh.
double emissions_kg_co2e(const EmissionsInputs& e);

struct MetricsRow {
  uint64_t step = 0;
  double train_loss = 0;
  double val_loss = 0;
  double perplexity = 0;
  double tokens_per_sec = 0;
  double batches_per_sec = 0;
};

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& p);

// Emits (step, val_loss) and (step, perplexity) CSVs plus one standalone SVG
// line chart per series. Empty metrics are an error and write nothing.
void export_curves(const std::filesystem::path& metrics_csv,
                   const std::filesystem::path& out_dir);

// Tier accounting, drop counts, measured throughput, and the published
// full-scale reference figures (labeled as non-targets).
nlohmann::json stats_report(const PipelineConfig& cfg);

}  // namespace forge
