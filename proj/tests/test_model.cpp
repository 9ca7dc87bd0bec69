#include "forge/model.hpp"

#include <random>

#include "doctest.h"
#include "forge/trainer.hpp"
#include "test_support.hpp"

using namespace forge;
using nn::Mat;
using nn::Model;
using nn::ModelConfig;

namespace {

ModelConfig tiny_cfg() {
  ModelConfig cfg;
  cfg.n_layers = 2;
  cfg.n_heads = 2;
  cfg.d_head = 4;
  cfg.context_T = 8;
  cfg.vocab_V = 32;
  return cfg;
}

std::vector<uint32_t> random_ids(size_t n, size_t V, uint64_t seed) {
  Rng rng(seed);
  std::vector<uint32_t> ids(n);
  for (auto& id : ids) id = static_cast<uint32_t>(rng.below(V));
  return ids;
}

}  // namespace

TEST_CASE("init statistics: weights near N(0, 0.02), biases exactly zero") {
  ModelConfig cfg = tiny_cfg();
  cfg.vocab_V = 2000;  // wte gets >= 10k entries
  Model model(cfg);
  model.init(123);

  for (const auto* p : model.params()) {
    if (p->kind == nn::ParamKind::Bias) {
      CHECK(p->w.cwiseAbs().maxCoeff() == 0.0);
    } else if (p->kind == nn::ParamKind::Gain) {
      CHECK(p->w.minCoeff() == 1.0);
      CHECK(p->w.maxCoeff() == 1.0);
    } else if (p->w.size() >= 10000) {
      const double mean = p->w.mean();
      const double std =
          std::sqrt((p->w.array() - mean).square().sum() / p->w.size());
      CAPTURE(p->name);
      CHECK(std::abs(mean) < 0.002);
      CHECK(std::abs(std - 0.02) < 0.002);
    }
  }
}

TEST_CASE("same seed gives bit-identical parameters") {
  Model a(tiny_cfg()), b(tiny_cfg());
  a.init(9);
  b.init(9);
  for (size_t i = 0; i < a.params().size(); ++i)
    CHECK(a.params()[i]->w == b.params()[i]->w);
  Model c(tiny_cfg());
  c.init(10);
  bool any_diff = false;
  for (size_t i = 0; i < a.params().size(); ++i)
    if (a.params()[i]->kind == nn::ParamKind::Weight &&
        a.params()[i]->w != c.params()[i]->w)
      any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("forward shape and causality") {
  const auto cfg = tiny_cfg();
  Model model(cfg);
  model.init(7);
  const size_t B = 2, T = 8;
  auto ids = random_ids(B * T, cfg.vocab_V, 5);
  const Mat logits = model.forward(ids, B, T);
  CHECK(logits.rows() == static_cast<Eigen::Index>(B * T));
  CHECK(logits.cols() == static_cast<Eigen::Index>(cfg.vocab_V));

  // perturbing the token at position j leaves logits at positions < j
  // bit-identical
  for (size_t j : {1ul, 4ul, 7ul}) {
    auto perturbed = ids;
    perturbed[j] = (perturbed[j] + 1) % cfg.vocab_V;
    const Mat other = model.forward(perturbed, B, T);
    for (size_t t = 0; t < j; ++t)
      for (Eigen::Index c = 0; c < logits.cols(); ++c)
        CHECK(logits(t, c) == other(t, c));  // row t of batch 0, exact
  }
}

TEST_CASE("causality holds for the rotary variant too") {
  auto cfg = tiny_cfg();
  cfg.positional = nn::Positional::Rotary;
  Model model(cfg);
  model.init(7);
  const size_t B = 1, T = 8;
  auto ids = random_ids(B * T, cfg.vocab_V, 6);
  const Mat logits = model.forward(ids, B, T);
  auto perturbed = ids;
  perturbed[5] = (perturbed[5] + 3) % cfg.vocab_V;
  const Mat other = model.forward(perturbed, B, T);
  for (size_t t = 0; t < 5; ++t)
    for (Eigen::Index c = 0; c < logits.cols(); ++c)
      CHECK(logits(t, c) == other(t, c));
}

TEST_CASE("fresh model loss is within 2 percent of ln(V)") {
  for (size_t V : {32ul, 257ul}) {
    auto cfg = tiny_cfg();
    cfg.vocab_V = V;
    Model model(cfg);
    model.init(21);
    const size_t B = 4, T = 8;
    const double loss = model.eval_loss(random_ids(B * T, V, 3),
                                        random_ids(B * T, V, 4), B, T);
    CHECK(std::abs(loss - std::log(double(V))) / std::log(double(V)) < 0.02);
  }
}

TEST_CASE("all-zero logits lose exactly ln(V)") {
#ifdef FORGE_REAL_FLOAT
  constexpr double tol = 1e-6;
#else
  constexpr double tol = 1e-12;
#endif
  Mat logits = Mat::Zero(6, 10);
  std::vector<uint32_t> targets = {0, 3, 9, 2, 5, 7};
  CHECK(nn::cross_entropy(logits, targets) ==
        doctest::Approx(std::log(10.0)).epsilon(tol));
}

TEST_CASE("loss matches the high-precision fixture") {
  const auto fx = nlohmann::json::parse(
      read_file(testsup::data_dir() / "numeric_fixtures.json"));
  const auto& f = fx.at("loss_1x2x3");
  Mat logits(2, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      logits(i, j) = f.at("logits")[i][j].get<double>();
  const auto targets = f.at("targets").get<std::vector<uint32_t>>();
  const double expect = std::stod(f.at("loss").get<std::string>());
  CHECK(nn::cross_entropy(logits, targets) ==
        doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("loss goes to zero as the target margin grows") {
  std::vector<uint32_t> targets = {1};
  double prev = 1e300;
  for (double margin : {2.0, 8.0, 32.0}) {
    Mat logits = Mat::Zero(1, 4);
    logits(0, 1) = margin;
    const double loss = nn::cross_entropy(logits, targets);
    CHECK(loss < prev);
    prev = loss;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("perplexity is the exponential of the loss") {
  CHECK(perplexity(0.0) == doctest::Approx(1.0));
  CHECK(perplexity(std::log(32.0)) == doctest::Approx(32.0));
  CHECK(perplexity(std::log(50257.0)) == doctest::Approx(50257.0));
}

// central differences need the double build to resolve 1e-4; the float
// build gets a correspondingly looser sanity bound
#ifdef FORGE_REAL_FLOAT
constexpr double kGradTol = 5e-2;
constexpr double kGradEps = 1e-2;
#else
constexpr double kGradTol = 1e-4;
constexpr double kGradEps = 1e-5;
#endif

TEST_CASE("gradient check on the tiny model") {
  const double max_rel = grad_check(tiny_cfg(), kGradEps, 200, 42);
  CHECK(max_rel < kGradTol);
}

TEST_CASE("gradient check covers the rotary variant") {
  auto cfg = tiny_cfg();
  cfg.positional = nn::Positional::Rotary;
  const double max_rel = grad_check(cfg, kGradEps, 120, 43);
  CHECK(max_rel < kGradTol);
}

TEST_CASE("grad_check is deterministic") {
  CHECK(grad_check(tiny_cfg(), 1e-5, 60, 17) ==
        grad_check(tiny_cfg(), 1e-5, 60, 17));
}

TEST_CASE("near-zero loss gives near-zero gradients") {
  auto cfg = tiny_cfg();
  Model model(cfg);
  model.init(3);
  // force the head bias to put all probability mass on token 0
  for (nn::Param* p : model.params()) {
    if (p->name == "head.b") p->w(0, 0) = 60.0;
  }
  const size_t B = 1, T = 4;
  std::vector<uint32_t> input = random_ids(B * T, cfg.vocab_V, 8);
  std::vector<uint32_t> target(B * T, 0);
  model.zero_grad();
  const double loss = model.forward_backward(input, target, B, T);
  CHECK(loss < 1e-12);
  double norm = 0;
  for (const nn::Param* p : model.params()) norm += p->g.squaredNorm();
  CHECK(std::sqrt(norm) < 1e-8);
}

TEST_CASE("parameter count of the toy configuration stays small") {
  nn::ModelConfig cfg;
  cfg.n_layers = 2;
  cfg.n_heads = 4;
  cfg.d_head = 16;
  cfg.context_T = 64;
  cfg.vocab_V = 257;
  Model model(cfg);
  CHECK(model.num_parameters() <= 500000);
}
