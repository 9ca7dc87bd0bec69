#include "forge/model.hpp"

#include <cmath>

namespace forge::nn {

namespace {

constexpr real kLnEps = static_cast<real>(1e-5);
constexpr real kGeluK = static_cast<real>(0.7978845608028654);  // sqrt(2/pi)
constexpr real kGeluC = static_cast<real>(0.044715);

real gelu(real x) {
  return real(0.5) * x * (real(1) + std::tanh(kGeluK * (x + kGeluC * x * x * x)));
}

real gelu_grad(real x) {
  const real t = std::tanh(kGeluK * (x + kGeluC * x * x * x));
  return real(0.5) * (real(1) + t) +
         real(0.5) * x * (real(1) - t * t) * kGeluK *
             (real(1) + real(3) * kGeluC * x * x);
}

}  // namespace

real cross_entropy(const Mat& logits, const std::vector<uint32_t>& targets) {
  const Eigen::Index n = logits.rows();
  if (static_cast<size_t>(n) != targets.size())
    throw ForgeError("cross_entropy: row/target count mismatch");
  real total = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = logits.row(i);
    const real mx = row.maxCoeff();
    const real lse = mx + std::log((row.array() - mx).exp().sum());
    total += lse - row(targets[i]);
  }
  return total / static_cast<real>(n);
}

struct Model::Cache {
  Mat x0;  // embedding output
  struct Layer {
    Mat x_in;
    Mat ln1_xhat, ln1_out;
    std::vector<real> ln1_rstd;
    Mat q, k, v;                // post-rotary q/k, (B*T) x C
    std::vector<Mat> att;       // B*H softmax matrices, each T x T
    Mat att_out;                // concat of head outputs, (B*T) x C
    Mat x_mid;
    Mat ln2_xhat, ln2_out;
    std::vector<real> ln2_rstd;
    Mat fc_pre, fc_act;
  };
  std::vector<Layer> layers;
  Mat x_last;
  Mat lnf_xhat, lnf_out;
  std::vector<real> lnf_rstd;
};

Model::Model(const ModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.positional == Positional::Rotary && cfg_.d_head % 2 != 0)
    throw ForgeError("rotary positional encoding requires an even d_head");

  const auto C = static_cast<Eigen::Index>(cfg_.d_model());
  const auto V = static_cast<Eigen::Index>(cfg_.vocab_V);
  const auto Tmax = static_cast<Eigen::Index>(cfg_.context_T);

  auto add = [&](std::unique_ptr<Param>& slot, std::string name,
                 Eigen::Index r, Eigen::Index c, ParamKind kind) {
    slot = std::make_unique<Param>(std::move(name), r, c, kind);
    params_.push_back(slot.get());
  };
  using enum ParamKind;

  add(wte_, "wte", V, C, Weight);
  if (cfg_.positional == Positional::LearnedAbsolute)
    add(wpe_, "wpe", Tmax, C, Weight);

  layers_.resize(cfg_.n_layers);
  for (size_t l = 0; l < cfg_.n_layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    auto& lp = layers_[l];
    add(lp.ln1_g, p + "ln1.gain", 1, C, Gain);
    add(lp.ln1_b, p + "ln1.bias", 1, C, Bias);
    add(lp.w_qkv, p + "attn.w_qkv", C, 3 * C, Weight);
    add(lp.b_qkv, p + "attn.b_qkv", 1, 3 * C, Bias);
    add(lp.w_o, p + "attn.w_o", C, C, Weight);
    add(lp.b_o, p + "attn.b_o", 1, C, Bias);
    add(lp.ln2_g, p + "ln2.gain", 1, C, Gain);
    add(lp.ln2_b, p + "ln2.bias", 1, C, Bias);
    add(lp.w_fc, p + "mlp.w_fc", C, 4 * C, Weight);
    add(lp.b_fc, p + "mlp.b_fc", 1, 4 * C, Bias);
    add(lp.w_proj, p + "mlp.w_proj", 4 * C, C, Weight);
    add(lp.b_proj, p + "mlp.b_proj", 1, C, Bias);
  }
  add(lnf_g_, "lnf.gain", 1, C, Gain);
  add(lnf_b_, "lnf.bias", 1, C, Bias);
  add(head_w_, "head.w", C, V, Weight);
  add(head_b_, "head.b", 1, V, Bias);
}

void Model::init(uint64_t seed) {
  Rng rng(seed);
  for (Param* p : params_) {
    switch (p->kind) {
      case ParamKind::Gain:
        p->w.setOnes();
        break;
      case ParamKind::Bias:
        p->w.setZero();
        break;
      case ParamKind::Weight:
        for (Eigen::Index i = 0; i < p->w.rows(); ++i)
          for (Eigen::Index j = 0; j < p->w.cols(); ++j)
            p->w(i, j) = static_cast<real>(rng.normal() * 0.02);
        break;
    }
    p->g.setZero();
    p->m.setZero();
    p->v.setZero();
  }
}

size_t Model::num_parameters() const {
  size_t n = 0;
  for (const Param* p : params_) n += static_cast<size_t>(p->w.size());
  return n;
}

void Model::zero_grad() {
  for (Param* p : params_) p->g.setZero();
}

namespace {

// y = x_hat * gain + bias, cached per row
void layernorm_forward(const Mat& x, const Param& gain, const Param& bias,
                       Mat& xhat, Mat& out, std::vector<real>& rstd) {
  const Eigen::Index n = x.rows(), c = x.cols();
  xhat.resize(n, c);
  out.resize(n, c);
  rstd.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const real mean = x.row(i).mean();
    const real var = (x.row(i).array() - mean).square().sum() / real(c);
    const real rs = real(1) / std::sqrt(var + kLnEps);
    rstd[i] = rs;
    xhat.row(i) = (x.row(i).array() - mean) * rs;
    out.row(i) =
        xhat.row(i).array() * gain.w.row(0).array() + bias.w.row(0).array();
  }
}

// returns dx; accumulates gain/bias grads
Mat layernorm_backward(const Mat& dy, const Mat& xhat,
                       const std::vector<real>& rstd, Param& gain,
                       Param& bias) {
  const Eigen::Index n = dy.rows(), c = dy.cols();
  Mat dx(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Array<real, 1, Eigen::Dynamic> dxhat =
        dy.row(i).array() * gain.w.row(0).array();
    gain.g.row(0).array() += dy.row(i).array() * xhat.row(i).array();
    bias.g.row(0).array() += dy.row(i).array();
    const real m1 = dxhat.mean();
    const real m2 = (dxhat * xhat.row(i).array()).mean();
    dx.row(i) = (dxhat - m1 - xhat.row(i).array() * m2) * rstd[i];
  }
  return dx;
}

void rotate_qk(Mat& mat, size_t B, size_t T, size_t H, size_t d, bool inverse) {
  // in-place rotary transform of a (B*T) x (H*d) block of q or k
  for (size_t b = 0; b < B; ++b) {
    for (size_t t = 0; t < T; ++t) {
      const Eigen::Index row = static_cast<Eigen::Index>(b * T + t);
      for (size_t h = 0; h < H; ++h) {
        for (size_t i = 0; i < d / 2; ++i) {
          const real theta = static_cast<real>(
              t * std::pow(10000.0, -2.0 * static_cast<double>(i) /
                                        static_cast<double>(d)));
          const real cs = std::cos(theta);
          const real sn = inverse ? -std::sin(theta) : std::sin(theta);
          const Eigen::Index c0 = static_cast<Eigen::Index>(h * d + 2 * i);
          const real a = mat(row, c0), bb = mat(row, c0 + 1);
          mat(row, c0) = a * cs - bb * sn;
          mat(row, c0 + 1) = a * sn + bb * cs;
        }
      }
    }
  }
}

}  // namespace

Mat Model::forward_impl(const std::vector<uint32_t>& ids, size_t B, size_t T,
                        Cache* cache) const {
  if (ids.size() != B * T) throw ForgeError("forward: ids size != B*T");
  if (T > cfg_.context_T) throw ForgeError("forward: T exceeds context_T");
  for (uint32_t id : ids)
    if (id >= cfg_.vocab_V)
      throw ForgeError("forward: token id out of range: " + std::to_string(id));

  const auto C = static_cast<Eigen::Index>(cfg_.d_model());
  const size_t H = cfg_.n_heads;
  const size_t d = cfg_.d_head;
  const Eigen::Index N = static_cast<Eigen::Index>(B * T);
  const real scale = real(1) / std::sqrt(static_cast<real>(d));

  Mat x(N, C);
  for (Eigen::Index r = 0; r < N; ++r) {
    x.row(r) = wte_->w.row(ids[r]);
    if (cfg_.positional == Positional::LearnedAbsolute)
      x.row(r) += wpe_->w.row(static_cast<Eigen::Index>(r % T));
  }
  if (cache) {
    cache->x0 = x;
    cache->layers.resize(cfg_.n_layers);
  }

  Mat ln_xhat, ln_out;
  std::vector<real> ln_rstd;

  for (size_t l = 0; l < cfg_.n_layers; ++l) {
    const auto& lp = layers_[l];
    Cache::Layer* cl = cache ? &cache->layers[l] : nullptr;
    if (cl) cl->x_in = x;

    layernorm_forward(x, *lp.ln1_g, *lp.ln1_b, ln_xhat, ln_out, ln_rstd);
    if (cl) {
      cl->ln1_xhat = ln_xhat;
      cl->ln1_out = ln_out;
      cl->ln1_rstd = ln_rstd;
    }

    Mat qkv = ln_out * lp.w_qkv->w;
    qkv.rowwise() += lp.b_qkv->w.row(0);
    Mat q = qkv.leftCols(C);
    Mat k = qkv.middleCols(C, C);
    Mat v = qkv.rightCols(C);
    if (cfg_.positional == Positional::Rotary) {
      rotate_qk(q, B, T, H, d, false);
      rotate_qk(k, B, T, H, d, false);
    }
    if (cl) {
      cl->q = q;
      cl->k = k;
      cl->v = v;
      cl->att.resize(B * H);
    }

    Mat att_out(N, C);
    const auto Ti = static_cast<Eigen::Index>(T);
    const auto di = static_cast<Eigen::Index>(d);
    for (size_t b = 0; b < B; ++b) {
      const Eigen::Index r0 = static_cast<Eigen::Index>(b * T);
      for (size_t h = 0; h < H; ++h) {
        const Eigen::Index c0 = static_cast<Eigen::Index>(h * d);
        auto qb = q.block(r0, c0, Ti, di);
        auto kb = k.block(r0, c0, Ti, di);
        auto vb = v.block(r0, c0, Ti, di);

        Mat scores = (qb * kb.transpose()) * scale;
        Mat p = Mat::Zero(Ti, Ti);
        for (Eigen::Index i = 0; i < Ti; ++i) {
          // causal: position i attends to positions <= i
          auto row = scores.row(i).head(i + 1);
          const real mx = row.maxCoeff();
          Eigen::Array<real, 1, Eigen::Dynamic> e = (row.array() - mx).exp();
          p.row(i).head(i + 1) = e / e.sum();
        }
        att_out.block(r0, c0, Ti, di) = p * vb;
        if (cl) cl->att[b * H + h] = std::move(p);
      }
    }
    if (cl) cl->att_out = att_out;

    Mat x_attn = att_out * lp.w_o->w;
    x_attn.rowwise() += lp.b_o->w.row(0);
    x += x_attn;
    if (cl) cl->x_mid = x;

    layernorm_forward(x, *lp.ln2_g, *lp.ln2_b, ln_xhat, ln_out, ln_rstd);
    if (cl) {
      cl->ln2_xhat = ln_xhat;
      cl->ln2_out = ln_out;
      cl->ln2_rstd = ln_rstd;
    }

    Mat fc_pre = ln_out * lp.w_fc->w;
    fc_pre.rowwise() += lp.b_fc->w.row(0);
    Mat fc_act = fc_pre.unaryExpr([](real t) { return gelu(t); });
    if (cl) {
      cl->fc_pre = fc_pre;
      cl->fc_act = fc_act;
    }

    Mat proj = fc_act * lp.w_proj->w;
    proj.rowwise() += lp.b_proj->w.row(0);
    x += proj;
  }

  if (cache) cache->x_last = x;
  layernorm_forward(x, *lnf_g_, *lnf_b_, ln_xhat, ln_out, ln_rstd);
  if (cache) {
    cache->lnf_xhat = ln_xhat;
    cache->lnf_out = ln_out;
    cache->lnf_rstd = ln_rstd;
  }

  Mat logits = ln_out * head_w_->w;
  logits.rowwise() += head_b_->w.row(0);
  return logits;
}

Mat Model::forward(const std::vector<uint32_t>& ids, size_t B,
                   size_t T) const {
  return forward_impl(ids, B, T, nullptr);
}

real Model::eval_loss(const std::vector<uint32_t>& input,
                      const std::vector<uint32_t>& targets, size_t B,
                      size_t T) const {
  return cross_entropy(forward_impl(input, B, T, nullptr), targets);
}

real Model::forward_backward(const std::vector<uint32_t>& input,
                             const std::vector<uint32_t>& targets, size_t B,
                             size_t T) {
  Cache cache;
  Mat logits = forward_impl(input, B, T, &cache);
  const Eigen::Index N = logits.rows();
  if (static_cast<size_t>(N) != targets.size())
    throw ForgeError("forward_backward: target size mismatch");

  // loss and dlogits = (softmax - onehot) / N
  real loss = 0;
  Mat dlogits(N, logits.cols());
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto row = logits.row(i);
    const real mx = row.maxCoeff();
    Eigen::Array<real, 1, Eigen::Dynamic> e = (row.array() - mx).exp();
    const real z = e.sum();
    loss += mx + std::log(z) - row(targets[i]);
    dlogits.row(i) = e / z;
    dlogits(i, targets[i]) -= real(1);
  }
  loss /= static_cast<real>(N);
  dlogits /= static_cast<real>(N);

  const auto C = static_cast<Eigen::Index>(cfg_.d_model());
  const size_t H = cfg_.n_heads;
  const size_t d = cfg_.d_head;
  const real scale = real(1) / std::sqrt(static_cast<real>(d));
  const auto Ti = static_cast<Eigen::Index>(T);
  const auto di = static_cast<Eigen::Index>(d);

  // head
  head_w_->g.noalias() += cache.lnf_out.transpose() * dlogits;
  head_b_->g.row(0) += dlogits.colwise().sum();
  Mat dxf = dlogits * head_w_->w.transpose();

  Mat dx = layernorm_backward(dxf, cache.lnf_xhat, cache.lnf_rstd, *lnf_g_,
                              *lnf_b_);

  for (size_t l = cfg_.n_layers; l-- > 0;) {
    const auto& lp = layers_[l];
    auto& cl = cache.layers[l];

    // MLP branch
    lp.w_proj->g.noalias() += cl.fc_act.transpose() * dx;
    lp.b_proj->g.row(0) += dx.colwise().sum();
    Mat dfc_act = dx * lp.w_proj->w.transpose();
    Mat dfc_pre =
        dfc_act.array() *
        cl.fc_pre.unaryExpr([](real t) { return gelu_grad(t); }).array();
    lp.w_fc->g.noalias() += cl.ln2_out.transpose() * dfc_pre;
    lp.b_fc->g.row(0) += dfc_pre.colwise().sum();
    Mat da2 = dfc_pre * lp.w_fc->w.transpose();
    Mat dx_mid = layernorm_backward(da2, cl.ln2_xhat, cl.ln2_rstd, *lp.ln2_g,
                                    *lp.ln2_b);
    dx_mid += dx;  // residual

    // attention branch
    lp.w_o->g.noalias() += cl.att_out.transpose() * dx_mid;
    lp.b_o->g.row(0) += dx_mid.colwise().sum();
    Mat datt_out = dx_mid * lp.w_o->w.transpose();

    Mat dq = Mat::Zero(dx_mid.rows(), C);
    Mat dk = Mat::Zero(dx_mid.rows(), C);
    Mat dv = Mat::Zero(dx_mid.rows(), C);
    for (size_t b = 0; b < B; ++b) {
      const Eigen::Index r0 = static_cast<Eigen::Index>(b * T);
      for (size_t h = 0; h < H; ++h) {
        const Eigen::Index c0 = static_cast<Eigen::Index>(h * d);
        const Mat& p = cl.att[b * H + h];
        auto qb = cl.q.block(r0, c0, Ti, di);
        auto kb = cl.k.block(r0, c0, Ti, di);
        auto vb = cl.v.block(r0, c0, Ti, di);
        auto dout = datt_out.block(r0, c0, Ti, di);

        Mat dp = dout * vb.transpose();
        dv.block(r0, c0, Ti, di).noalias() += p.transpose() * dout;

        // softmax backward per row; masked entries have p == 0
        Mat ds(Ti, Ti);
        for (Eigen::Index i = 0; i < Ti; ++i) {
          const real dot = (dp.row(i).array() * p.row(i).array()).sum();
          ds.row(i) = p.row(i).array() * (dp.row(i).array() - dot);
        }
        dq.block(r0, c0, Ti, di).noalias() += ds * kb * scale;
        dk.block(r0, c0, Ti, di).noalias() += ds.transpose() * qb * scale;
      }
    }
    if (cfg_.positional == Positional::Rotary) {
      rotate_qk(dq, B, T, H, d, true);
      rotate_qk(dk, B, T, H, d, true);
    }

    Mat dqkv(dx_mid.rows(), 3 * C);
    dqkv.leftCols(C) = dq;
    dqkv.middleCols(C, C) = dk;
    dqkv.rightCols(C) = dv;

    lp.w_qkv->g.noalias() += cl.ln1_out.transpose() * dqkv;
    lp.b_qkv->g.row(0) += dqkv.colwise().sum();
    Mat da1 = dqkv * lp.w_qkv->w.transpose();
    Mat dx_in = layernorm_backward(da1, cl.ln1_xhat, cl.ln1_rstd, *lp.ln1_g,
                                   *lp.ln1_b);
    dx_in += dx_mid;  // residual
    dx = std::move(dx_in);
  }

  for (Eigen::Index r = 0; r < N; ++r) {
    wte_->g.row(input[r]) += dx.row(r);
    if (cfg_.positional == Positional::LearnedAbsolute)
      wpe_->g.row(static_cast<Eigen::Index>(r % T)) += dx.row(r);
  }
  return loss;
}

}  // namespace forge::nn
