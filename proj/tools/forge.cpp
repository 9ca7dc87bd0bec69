// forge: corpus curation and desk-scale causal LM pretraining pipeline.
//
// Subcommands chain through a workspace directory:
//   ingest -> filter -> dedup -> tokenize -> pack -> train -> generate -> report
// `pipeline` runs the whole chain; `stats` prints the report JSON without
// writing files. Exit codes: 0 ok, 1 stage failure, 2 invalid configuration.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "forge/pipeline.hpp"
#include "forge/trainer.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "pipeline config JSON")
      ->required();
  cmd->add_option("--set", opts.overrides,
                  "dotted-path override, e.g. --set pack.tier=Small");
}

int run_stage(const CommonOpts& opts, const std::string& stage,
              const std::string& prompt) {
  forge::PipelineConfig cfg;
  try {
    cfg = forge::PipelineConfig::load_file(opts.config_path, opts.overrides);
  } catch (const forge::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  }

  try {
    nlohmann::json summary;
    if (stage == "ingest") summary = forge::run_ingest(cfg);
    else if (stage == "filter") summary = forge::run_filter(cfg);
    else if (stage == "dedup") summary = forge::run_dedup(cfg);
    else if (stage == "tokenize") summary = forge::run_tokenize(cfg);
    else if (stage == "pack") summary = forge::run_pack(cfg);
    else if (stage == "train") summary = forge::run_train(cfg);
    else if (stage == "generate") summary = forge::run_generate(cfg, prompt);
    else if (stage == "stats") summary = forge::run_stats(cfg);
    else if (stage == "report") summary = forge::run_report(cfg);
    else if (stage == "pipeline") summary = forge::run_all(cfg);
    std::cout << summary.dump(1) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "stage '" << stage << "' failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hardware-corpus curation and pretraining pipeline"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string prompt;

  for (const char* name : {"ingest", "filter", "dedup", "tokenize", "pack",
                           "train", "stats", "report", "pipeline"}) {
    auto* cmd = app.add_subcommand(name);
    add_common(cmd, opts);
  }
  auto* gen = app.add_subcommand("generate");
  add_common(gen, opts);
  gen->add_option("--prompt", prompt, "prompt text (default: config sample_prompt)");

  CLI11_PARSE(app, argc, argv);

  const std::string stage = app.get_subcommands().front()->get_name();
  return run_stage(opts, stage, prompt);
}
