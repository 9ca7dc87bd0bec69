#include "forge/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "json.hpp"

namespace forge {

using nn::Mat;
using nn::Param;
using nn::real;

void Adam::step(std::vector<Param*>& params, double grad_scale) {
  ++t_;
  const real lr = static_cast<real>(cfg_.lr);
  const real b1 = static_cast<real>(cfg_.beta1);
  const real b2 = static_cast<real>(cfg_.beta2);
  const real eps = static_cast<real>(cfg_.eps);
  const real bc1 = real(1) - static_cast<real>(std::pow(cfg_.beta1, t_));
  const real bc2 = real(1) - static_cast<real>(std::pow(cfg_.beta2, t_));

  for (Param* p : params) {
    Mat g = p->g * static_cast<real>(grad_scale);
    if (!g.allFinite())
      throw ForgeError("non-finite gradient in parameter block '" + p->name +
                       "'");
    p->m = b1 * p->m + (real(1) - b1) * g;
    p->v.array() = b2 * p->v.array() + (real(1) - b2) * g.array().square();
    // decoupled decay uses the pre-step value
    if (p->decay() && cfg_.weight_decay != 0.0)
      p->w -= (lr * static_cast<real>(cfg_.weight_decay)) * p->w;
    p->w.array() -=
        lr * (p->m.array() / bc1) / ((p->v.array() / bc2).sqrt() + eps);
  }
}

std::vector<uint32_t> generate_ids(const nn::Model& model,
                                   std::vector<uint32_t> ctx, uint32_t eos_id,
                                   const GenerateConfig& cfg) {
  if (ctx.empty()) ctx.push_back(eos_id);
  Rng rng(cfg.seed);
  const size_t context_T = model.config().context_T;
  std::vector<uint32_t> out;

  for (size_t n = 0; n < cfg.max_new; ++n) {
    const size_t start = ctx.size() > context_T ? ctx.size() - context_T : 0;
    std::vector<uint32_t> window(ctx.begin() + start, ctx.end());
    Mat logits = model.forward(window, 1, window.size());
    const auto last = logits.row(logits.rows() - 1);
    const size_t V = model.config().vocab_V;

    uint32_t next = 0;
    if (cfg.temperature == 0.0) {
      real best = last(0);
      for (size_t i = 1; i < V; ++i)
        if (last(i) > best) {  // strict: ties resolve to the lowest id
          best = last(i);
          next = static_cast<uint32_t>(i);
        }
    } else {
      std::vector<size_t> order(V);
      std::iota(order.begin(), order.end(), 0);
      size_t k = (cfg.top_k == 0 || cfg.top_k > V) ? V : cfg.top_k;
      std::partial_sort(order.begin(), order.begin() + k, order.end(),
                        [&](size_t a, size_t b) {
                          if (last(a) != last(b)) return last(a) > last(b);
                          return a < b;
                        });
      std::vector<double> probs(k);
      double mx = last(order[0]);
      double z = 0;
      for (size_t i = 0; i < k; ++i) {
        probs[i] = std::exp((static_cast<double>(last(order[i])) - mx) /
                            cfg.temperature);
        z += probs[i];
      }
      double u = rng.uniform() * z;
      size_t pick = k - 1;
      double acc = 0;
      for (size_t i = 0; i < k; ++i) {
        acc += probs[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
      next = static_cast<uint32_t>(order[pick]);
    }
    if (next == eos_id) break;
    ctx.push_back(next);
    out.push_back(next);
  }
  return out;
}

std::string generate(const nn::Model& model, const TokenizerModel& tokenizer,
                     const std::string& prompt, const GenerateConfig& cfg) {
  auto ids = generate_ids(model, tokenizer.encode(prompt), tokenizer.eos_id(),
                          cfg);
  return tokenizer.decode(ids);
}

double grad_check(const nn::ModelConfig& cfg, double eps, size_t samples,
                  uint64_t seed) {
  nn::Model model(cfg);
  model.init(seed);

  const size_t B = 2, T = std::min<size_t>(8, cfg.context_T);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<uint32_t> input(B * T), target(B * T);
  for (auto& id : input) id = static_cast<uint32_t>(rng.below(cfg.vocab_V));
  for (auto& id : target) id = static_cast<uint32_t>(rng.below(cfg.vocab_V));

  model.zero_grad();
  model.forward_backward(input, target, B, T);

  auto& params = model.params();
  double max_rel = 0;
  for (size_t s = 0; s < samples; ++s) {
    Param* p = params[rng.below(params.size())];
    const Eigen::Index idx =
        static_cast<Eigen::Index>(rng.below(static_cast<uint64_t>(p->w.size())));
    const real analytic = p->g(idx);

    const real orig = p->w(idx);
    p->w(idx) = orig + static_cast<real>(eps);
    const double up = model.eval_loss(input, target, B, T);
    p->w(idx) = orig - static_cast<real>(eps);
    const double down = model.eval_loss(input, target, B, T);
    p->w(idx) = orig;

    const double numeric = (up - down) / (2.0 * eps);
    const double rel = std::abs(analytic - numeric) /
                       std::max({1e-6, std::abs(double(analytic)),
                                 std::abs(numeric)});
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

namespace {

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}
void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_tensor(std::string& out, const std::string& name, const Mat& m) {
  put_u16(out, static_cast<uint16_t>(name.size()));
  out += name;
  out.push_back(sizeof(real) == 4 ? 1 : 2);  // dtype: 1=f32, 2=f64
  out.push_back(2);                          // ndim
  put_u32(out, static_cast<uint32_t>(m.rows()));
  put_u32(out, static_cast<uint32_t>(m.cols()));
  const size_t bytes = static_cast<size_t>(m.size()) * sizeof(real);
  const size_t off = out.size();
  out.resize(off + bytes);
  std::memcpy(out.data() + off, m.data(), bytes);
}

struct TensorView {
  std::string name;
  Eigen::Index rows = 0, cols = 0;
  const char* data = nullptr;
};

std::vector<TensorView> parse_archive(const std::string& blob) {
  std::vector<TensorView> tensors;
  if (blob.size() < 10 || blob.compare(0, 4, "FTAR") != 0)
    throw ForgeError("not a tensor archive");
  size_t off = 6;  // magic + version
  uint32_t count = 0;
  for (int i = 3; i >= 0; --i)
    count = (count << 8) | static_cast<uint8_t>(blob[6 + i]);
  off = 10;
  for (uint32_t n = 0; n < count; ++n) {
    const uint16_t name_len = static_cast<uint8_t>(blob[off]) |
                              (static_cast<uint8_t>(blob[off + 1]) << 8);
    off += 2;
    TensorView tv;
    tv.name = blob.substr(off, name_len);
    off += name_len;
    const uint8_t dtype = static_cast<uint8_t>(blob[off++]);
    if (dtype != (sizeof(real) == 4 ? 1 : 2))
      throw ForgeError("checkpoint precision does not match this build");
    const uint8_t ndim = static_cast<uint8_t>(blob[off++]);
    if (ndim != 2) throw ForgeError("unexpected tensor rank");
    auto get_u32 = [&](size_t o) {
      uint32_t v = 0;
      for (int i = 3; i >= 0; --i)
        v = (v << 8) | static_cast<uint8_t>(blob[o + i]);
      return v;
    };
    tv.rows = get_u32(off);
    tv.cols = get_u32(off + 4);
    off += 8;
    tv.data = blob.data() + off;
    off += static_cast<size_t>(tv.rows) * tv.cols * sizeof(real);
    if (off > blob.size()) throw ForgeError("truncated tensor archive");
    tensors.push_back(std::move(tv));
  }
  return tensors;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const nn::Model& model,
                     const Adam& opt, const CheckpointMeta& meta) {
  std::filesystem::create_directories(dir);

  std::string blob = "FTAR";
  put_u16(blob, 1);
  put_u32(blob, static_cast<uint32_t>(model.params().size() * 3));
  for (const Param* p : model.params()) {
    append_tensor(blob, p->name, p->w);
    append_tensor(blob, "adam.m." + p->name, p->m);
    append_tensor(blob, "adam.v." + p->name, p->v);
  }
  write_file(dir / "tensors.bin", blob);

  nlohmann::json j;
  j["step"] = meta.step;
  j["val_loss"] = meta.val_loss;
  j["perplexity"] = meta.perplexity;
  j["sample_text"] = meta.sample_text;
  j["wallclock_sec"] = meta.wallclock_sec;
  j["config_hash"] = meta.config_hash;
  j["rng_state"] = meta.rng_state;
  j["adam_t"] = opt.t();
  write_file(dir / "meta.json", j.dump(1));
}

CheckpointMeta load_checkpoint(const std::filesystem::path& dir,
                               nn::Model& model, Adam* opt) {
  const auto j = nlohmann::json::parse(read_file(dir / "meta.json"));
  CheckpointMeta meta;
  meta.step = j.at("step").get<size_t>();
  meta.val_loss = j.at("val_loss").get<double>();
  meta.perplexity = j.at("perplexity").get<double>();
  meta.sample_text = j.at("sample_text").get<std::string>();
  meta.wallclock_sec = j.at("wallclock_sec").get<double>();
  meta.config_hash = j.at("config_hash").get<std::string>();
  meta.adam_t = j.at("adam_t").get<int64_t>();
  for (size_t i = 0; i < 4; ++i) meta.rng_state[i] = j.at("rng_state")[i];

  const std::string blob = read_file(dir / "tensors.bin");
  auto tensors = parse_archive(blob);
  std::unordered_map<std::string, const TensorView*> by_name;
  for (const auto& tv : tensors) by_name[tv.name] = &tv;

  auto load_into = [&](const std::string& name, Mat& dst) {
    auto it = by_name.find(name);
    if (it == by_name.end())
      throw ForgeError("checkpoint is missing tensor '" + name + "'");
    const TensorView& tv = *it->second;
    if (tv.rows != dst.rows() || tv.cols != dst.cols())
      throw ForgeError("checkpoint tensor '" + name + "' has shape " +
                       std::to_string(tv.rows) + "x" + std::to_string(tv.cols) +
                       ", model expects " + std::to_string(dst.rows()) + "x" +
                       std::to_string(dst.cols()));
    std::memcpy(dst.data(), tv.data,
                static_cast<size_t>(dst.size()) * sizeof(real));
  };
  for (Param* p : model.params()) {
    load_into(p->name, p->w);
    load_into("adam.m." + p->name, p->m);
    load_into("adam.v." + p->name, p->v);
  }
  if (opt) opt->set_t(meta.adam_t);
  return meta;
}

namespace {

void batch_views(const PackedBatch& b, std::vector<uint32_t>& input,
                 std::vector<uint32_t>& target) {
  const size_t T = b.row_stride - 1;
  input.resize(b.rows * T);
  target.resize(b.rows * T);
  for (size_t r = 0; r < b.rows; ++r) {
    const uint32_t* row = b.row(r);
    std::copy(row, row + T, input.begin() + r * T);
    std::copy(row + 1, row + T + 1, target.begin() + r * T);
  }
}

}  // namespace

double validation_loss(const nn::Model& model,
                       const std::vector<PackedBatch>& batches) {
  if (batches.empty()) throw ForgeError("validation set is empty");
  double weighted = 0;
  uint64_t positions = 0;
  std::vector<uint32_t> input, target;
  for (const auto& b : batches) {
    const size_t T = b.row_stride - 1;
    batch_views(b, input, target);
    const double loss = model.eval_loss(input, target, b.rows, T);
    weighted += loss * static_cast<double>(b.rows * T);
    positions += b.rows * T;
  }
  return weighted / static_cast<double>(positions);
}

TrainResult train(const TrainJob& job) {
  job.model_cfg.validate();
  job.opt_cfg.validate();
  job.schedule.validate(job.opt_cfg.grad_accum);
  if (job.train_batches.empty()) throw ForgeError("no training batches");
  if (job.val_batches.empty()) throw ForgeError("no validation batches");

  nn::Model model(job.model_cfg);
  model.init(job.schedule.seed);
  Adam opt(job.opt_cfg);
  Rng rng(job.schedule.seed ^ 0xabcdef1234567890ull);

  size_t start_step = 0;
  if (job.resume_from) {
    auto meta = load_checkpoint(*job.resume_from, model, &opt);
    rng.set_state(meta.rng_state);
    start_step = meta.step;
  }

  TrainResult result;
  std::ofstream metrics;
  if (!job.metrics_csv.empty()) {
    const bool fresh = start_step == 0 || !std::filesystem::exists(job.metrics_csv);
    if (job.metrics_csv.has_parent_path())
      std::filesystem::create_directories(job.metrics_csv.parent_path());
    metrics.open(job.metrics_csv, fresh ? std::ios::trunc : std::ios::app);
    if (!metrics) throw ForgeError("cannot open metrics csv");
    metrics.precision(17);
    if (fresh)
      metrics << "step,train_loss,val_loss,perplexity,tokens_per_sec,"
                 "batches_per_sec\n";
  }

  using clock = std::chrono::steady_clock;
  auto window_start = clock::now();
  uint64_t window_tokens = 0, window_batches = 0;
  double train_loss_sum = 0;
  size_t train_loss_count = 0;

  std::vector<uint32_t> input, target;

  auto checkpoint = [&](size_t step) {
    const auto now = clock::now();
    const double elapsed =
        std::chrono::duration<double>(now - window_start).count();
    TrainCheckpointRecord rec;
    rec.step = step;
    rec.train_loss = train_loss_count
                         ? train_loss_sum / static_cast<double>(train_loss_count)
                         : std::numeric_limits<double>::quiet_NaN();
    rec.val_loss = validation_loss(model, job.val_batches);
    rec.perplexity = perplexity(rec.val_loss);
    rec.tokens_per_sec =
        elapsed > 0 ? static_cast<double>(window_tokens) / elapsed : 0;
    rec.batches_per_sec =
        elapsed > 0 ? static_cast<double>(window_batches) / elapsed : 0;
    if (job.tokenizer)
      rec.sample_text =
          generate(model, *job.tokenizer, job.sample_prompt, job.sample_cfg);

    if (!job.checkpoint_root.empty()) {
      CheckpointMeta meta;
      meta.step = step;
      meta.val_loss = rec.val_loss;
      meta.perplexity = rec.perplexity;
      meta.sample_text = rec.sample_text;
      meta.wallclock_sec = elapsed;
      meta.config_hash = job.config_hash;
      meta.rng_state = rng.state();
      meta.adam_t = opt.t();
      char name[32];
      std::snprintf(name, sizeof(name), "step_%06zu", step);
      save_checkpoint(job.checkpoint_root / name, model, opt, meta);
    }
    if (metrics.is_open()) {
      metrics << step << ',' << rec.train_loss << ',' << rec.val_loss << ','
              << rec.perplexity << ',' << rec.tokens_per_sec << ','
              << rec.batches_per_sec << '\n';
      metrics.flush();
    }
    result.checkpoints.push_back(rec);
    train_loss_sum = 0;
    train_loss_count = 0;
    window_tokens = 0;
    window_batches = 0;
    window_start = clock::now();
  };

  if (start_step == 0) checkpoint(0);

  const size_t ga = job.opt_cfg.grad_accum;
  for (size_t step = start_step; step < job.schedule.total_steps; ++step) {
    model.zero_grad();
    double micro_loss_sum = 0;
    for (size_t micro = 0; micro < ga; ++micro) {
      const auto& batch =
          job.train_batches[(step * ga + micro) % job.train_batches.size()];
      const size_t T = batch.row_stride - 1;
      batch_views(batch, input, target);
      micro_loss_sum += model.forward_backward(input, target, batch.rows, T);
      window_tokens += batch.rows * T;
      ++window_batches;
    }
    opt.step(model.params(), 1.0 / static_cast<double>(ga));

    const double step_loss = micro_loss_sum / static_cast<double>(ga);
    if (!std::isfinite(step_loss))
      throw ForgeError("non-finite training loss at step " +
                       std::to_string(step + 1));
    train_loss_sum += step_loss;
    ++train_loss_count;

    const size_t done = step + 1;
    if (done % job.schedule.checkpoint_every == 0 ||
        done == job.schedule.total_steps)
      checkpoint(done);
    result.steps_run = done;
  }
  return result;
}

}  // namespace forge
