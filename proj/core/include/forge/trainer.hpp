#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "forge/model.hpp"
#include "forge/pack.hpp"
#include "forge/tokenizer.hpp"

namespace forge {

struct OptimizerConfig {
  double lr = 2e-4;
  double weight_decay = 0.1;  // decoupled, weights only
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-7;
  size_t grad_accum = 25;  // micro-iterations per optimizer step

  void validate() const {
    if (beta1 <= 0 || beta1 >= 1 || beta2 <= 0 || beta2 >= 1)
      throw ForgeError("adam betas must lie in (0, 1)");
    if (eps <= 0) throw ForgeError("adam eps must be positive");
    if (grad_accum < 1) throw ForgeError("grad_accum must be >= 1");
  }
};

struct TrainSchedule {
  size_t total_steps = 30000;
  std::optional<size_t> total_iterations;  // = total_steps * grad_accum
  size_t checkpoint_every = 1000;
  uint64_t seed = 0;

  void validate(size_t grad_accum) const {
    if (total_steps < 1) throw ForgeError("total_steps must be >= 1");
    if (checkpoint_every < 1 || checkpoint_every > total_steps)
      throw ForgeError("checkpoint_every must lie in [1, total_steps]");
    if (total_iterations && *total_iterations != total_steps * grad_accum)
      throw ForgeError(
          "total_iterations must equal total_steps * grad_accum (" +
          std::to_string(*total_iterations) + " != " +
          std::to_string(total_steps) + " * " + std::to_string(grad_accum) +
          ")");
  }
};

// Adam with bias correction plus decoupled weight decay applied to the
// pre-step value of decayed (weight) parameters only.
class Adam {
 public:
  explicit Adam(const OptimizerConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

  // grad_scale multiplies accumulated gradients (1/grad_accum for means).
  void step(std::vector<nn::Param*>& params, double grad_scale = 1.0);

  int64_t t() const { return t_; }
  void set_t(int64_t t) { t_ = t; }
  const OptimizerConfig& config() const { return cfg_; }

 private:
  OptimizerConfig cfg_;
  int64_t t_ = 0;
};

struct GenerateConfig {
  size_t max_new = 64;
  double temperature = 1.0;  // 0 -> greedy argmax, ties to lowest id
  size_t top_k = 0;          // 0 -> unrestricted
  uint64_t seed = 0;
};

// Autoregressive continuation of `prompt`; returns the generated text only.
// An empty prompt starts from EOS. Stops at max_new tokens or EOS.
std::string generate(const nn::Model& model, const TokenizerModel& tokenizer,
                     const std::string& prompt, const GenerateConfig& cfg);

std::vector<uint32_t> generate_ids(const nn::Model& model,
                                   std::vector<uint32_t> prompt_ids,
                                   uint32_t eos_id,
                                   const GenerateConfig& cfg);

// Compares analytic gradients against central finite differences on
// `samples` randomly chosen parameter entries; returns max relative error.
double grad_check(const nn::ModelConfig& cfg, double eps = 1e-5,
                  size_t samples = 200, uint64_t seed = 42);

struct CheckpointMeta {
  size_t step = 0;
  double val_loss = 0;
  double perplexity = 0;
  std::string sample_text;
  double wallclock_sec = 0;
  std::string config_hash;
  std::array<uint64_t, 4> rng_state{};
  int64_t adam_t = 0;
};

// Checkpoint directory: meta.json + tensors.bin (flat archive with every
// parameter and its Adam moments; per tensor: name, dtype, shape, LE data).
void save_checkpoint(const std::filesystem::path& dir, const nn::Model& model,
                     const Adam& opt, const CheckpointMeta& meta);
CheckpointMeta load_checkpoint(const std::filesystem::path& dir,
                               nn::Model& model, Adam* opt);

struct TrainJob {
  nn::ModelConfig model_cfg;
  OptimizerConfig opt_cfg;
  TrainSchedule schedule;
  std::vector<PackedBatch> train_batches;
  std::vector<PackedBatch> val_batches;
  std::filesystem::path checkpoint_root;  // empty -> keep checkpoints in memory only
  std::filesystem::path metrics_csv;      // empty -> no csv
  std::string config_hash;
  const TokenizerModel* tokenizer = nullptr;  // enables sample generation
  std::string sample_prompt;
  GenerateConfig sample_cfg;
  std::optional<std::filesystem::path> resume_from;
};

struct TrainCheckpointRecord {
  size_t step = 0;
  double train_loss = 0;  // mean since previous checkpoint; NaN at step 0
  double val_loss = 0;
  double perplexity = 0;
  double tokens_per_sec = 0;
  double batches_per_sec = 0;
  std::string sample_text;
};

struct TrainResult {
  std::vector<TrainCheckpointRecord> checkpoints;
  size_t steps_run = 0;
};

// Runs total_steps optimizer steps over the packed batches; evaluates the
// full validation set at step 0, every checkpoint_every steps, and the final
// step. Training is single-threaded and bit-reproducible per seed; resuming
// from a checkpoint reproduces the unbroken trajectory.
TrainResult train(const TrainJob& job);

double validation_loss(const nn::Model& model,
                       const std::vector<PackedBatch>& batches);

inline double perplexity(double loss) { return std::exp(loss); }

}  // namespace forge
