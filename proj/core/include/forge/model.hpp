#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "forge/util.hpp"

namespace forge::nn {

#ifdef FORGE_REAL_FLOAT
using real = float;
#else
using real = double;
#endif

using Mat =
    Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Weights draw from N(0, 0.02^2) and take weight decay; biases start at
// zero and norm gains at one, and neither is decayed.
enum class ParamKind { Weight, Bias, Gain };

// A named parameter tensor with its gradient and Adam moment buffers.
struct Param {
  std::string name;
  Mat w, g, m, v;
  ParamKind kind = ParamKind::Weight;

  Param(std::string n, Eigen::Index rows, Eigen::Index cols, ParamKind k)
      : name(std::move(n)),
        w(Mat::Zero(rows, cols)),
        g(Mat::Zero(rows, cols)),
        m(Mat::Zero(rows, cols)),
        v(Mat::Zero(rows, cols)),
        kind(k) {}

  bool decay() const { return kind == ParamKind::Weight; }
};

enum class Positional { LearnedAbsolute, Rotary };

struct ModelConfig {
  size_t n_layers = 24;
  size_t n_heads = 32;
  size_t d_head = 64;
  size_t context_T = 2048;
  size_t vocab_V = 50257;
  Positional positional = Positional::LearnedAbsolute;

  size_t d_model() const { return n_heads * d_head; }
  void validate() const {
    if (n_layers < 1 || n_heads < 1 || d_head < 1)
      throw ForgeError("model dimensions must be positive");
    if (context_T < 2) throw ForgeError("context_T must be >= 2");
    if (vocab_V < 2) throw ForgeError("vocab_V must be >= 2");
  }
};

// Reference scale of the full-size model (layers, heads, head dim, context);
// documentation constants, not the desk-scale defaults used in tests.
inline constexpr size_t kFullScaleModelShape[4] = {24, 32, 64, 2048};

real cross_entropy(const Mat& logits, const std::vector<uint32_t>& targets);

// Pre-norm decoder-only transformer: learned token (+ positional) embedding,
// per layer causal multi-head self-attention and a 4x GELU feed-forward,
// final layer norm, linear head. Forward/backward are hand-rolled and
// deterministic; all heavy lifting is dense Eigen arithmetic.
class Model {
 public:
  explicit Model(const ModelConfig& cfg);

  // Normal(0, 0.02^2) weights, zero biases, unit norm gains; seeded.
  void init(uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  std::vector<Param*>& params() { return params_; }
  const std::vector<Param*>& params() const { return params_; }
  size_t num_parameters() const;

  // Logits for B rows of T tokens each; result is (B*T) x V.
  Mat forward(const std::vector<uint32_t>& ids, size_t B, size_t T) const;

  // Mean cross-entropy without touching gradients.
  real eval_loss(const std::vector<uint32_t>& input,
                 const std::vector<uint32_t>& targets, size_t B,
                 size_t T) const;

  // Mean cross-entropy; accumulates dLoss/dParam into each Param::g.
  real forward_backward(const std::vector<uint32_t>& input,
                        const std::vector<uint32_t>& targets, size_t B,
                        size_t T);

  void zero_grad();

 private:
  struct LayerParams {
    std::unique_ptr<Param> ln1_g, ln1_b, w_qkv, b_qkv, w_o, b_o;
    std::unique_ptr<Param> ln2_g, ln2_b, w_fc, b_fc, w_proj, b_proj;
  };
  struct Cache;

  Mat forward_impl(const std::vector<uint32_t>& ids, size_t B, size_t T,
                   Cache* cache) const;

  ModelConfig cfg_;
  std::unique_ptr<Param> wte_, wpe_;
  std::vector<LayerParams> layers_;
  std::unique_ptr<Param> lnf_g_, lnf_b_, head_w_, head_b_;
  std::vector<Param*> params_;
};

}  // namespace forge::nn
