// Acceptance suite: one criterion per section, one PASS/FAIL line each.
// Exits nonzero if any criterion fails. Heavier than the unit tests; the
// whole suite is budgeted to run in a few minutes on one core.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "forge/config.hpp"
#include "forge/dedup.hpp"
#include "forge/ingest.hpp"
#include "forge/pack.hpp"
#include "forge/pipeline.hpp"
#include "forge/report.hpp"
#include "forge/tokenizer.hpp"
#include "forge/trainer.hpp"
#include "forge/unicode.hpp"
#include "test_support.hpp"

using namespace forge;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

struct Criterion {
  std::string name;
  bool ok = true;
  std::string detail;
  std::chrono::steady_clock::time_point start;

  explicit Criterion(std::string n)
      : name(std::move(n)), start(std::chrono::steady_clock::now()) {}

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }

  void finish() {
    std::ostringstream line;
    line << (ok ? "[PASS] " : "[FAIL] ") << name;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "  (%.1fs)", seconds());
    line << buf;
    if (!ok) line << "  -- " << detail;
    std::cout << line.str() << std::endl;
    if (!ok) ++g_failures;
  }
};

std::mt19937_64 g_rng(20240817);

std::vector<std::string> random_words(size_t n, const std::string& prefix) {
  std::vector<std::string> words(n);
  for (auto& w : words) w = prefix + std::to_string(g_rng() % 4000);
  return words;
}

std::string join_words(const std::vector<std::string>& ws) {
  std::string out;
  for (const auto& w : ws) {
    out += w;
    out += ' ';
  }
  return out;
}

// ---------------------------------------------------------------------------

void criterion1_minhash_fidelity() {
  Criterion c("1. MinHash fidelity (500 pairs, k=128, brute-force oracle)");

  const size_t k = 128;
  double abs_err_sum = 0;
  size_t within_015 = 0;
  const size_t pairs = 500;
  for (size_t p = 0; p < pairs; ++p) {
    const size_t len = 120 + g_rng() % 160;
    auto words_a = random_words(len, "p" + std::to_string(p) + "w");
    auto words_b = words_a;
    // mutate a random fraction of words (0% .. 60%)
    const double frac = double(g_rng() % 61) / 100.0;
    const size_t mutations = static_cast<size_t>(frac * double(len));
    for (size_t m = 0; m < mutations; ++m)
      words_b[g_rng() % len] = "mut" + std::to_string(g_rng() % 100000);

    const auto sa = shingle_set(DocId{}, join_words(words_a), 5);
    const auto sb = shingle_set(DocId{}, join_words(words_b), 5);
    const double truth = exact_jaccard(sa, sb);
    const double est = est_jaccard(minhash_sign(sa, k, p), minhash_sign(sb, k, p));
    const double err = std::abs(est - truth);
    abs_err_sum += err;
    if (err <= 0.15) ++within_015;
  }
  const double mean_err = abs_err_sum / double(pairs);
  c.require(mean_err <= 0.06,
            "mean |est-truth| = " + std::to_string(mean_err) + " > 0.06");
  c.require(within_015 >= 475,
            "only " + std::to_string(within_015) + "/500 within 0.15");
  c.require(c.seconds() < 60.0, "runtime exceeded 60 s");
  g_notes.push_back("criterion 1: mean abs error " + std::to_string(mean_err));
  c.finish();
}

void criterion2_near_dedup_recall() {
  Criterion c("2. near-dedup recall on planted 5% mutations");

  // 100 base documents plus 20 copies, each copy with 5% of its words
  // substituted (a trailing run; substitutes are strictly shorter so the
  // original stays the longest member of its cluster)
  std::vector<Document> docs;
  std::vector<std::pair<DocId, DocId>> planted;
  std::vector<DocId> originals;
  for (size_t i = 0; i < 100; ++i) {
    const size_t len = 150 + g_rng() % 100;
    auto words = random_words(len, "d" + std::to_string(i) + "w");
    Document base;
    base.text = join_words(words);
    base.id = content_id(base.text);
    originals.push_back(base.id);
    docs.push_back(base);

    if (i < 20) {
      auto mutated = words;
      const size_t span = std::max<size_t>(1, len / 20);  // 5% of the words
      for (size_t j = len - span; j < len; ++j)
        mutated[j] = "z" + std::to_string(g_rng() % 90 + 10);
      Document copy;
      copy.text = join_words(mutated);
      copy.id = content_id(copy.text);
      planted.emplace_back(base.id, copy.id);
      docs.push_back(copy);
    }
  }

  // brute-force oracle on the construction: planted pairs sit above threshold
  {
    std::unordered_map<std::string, size_t> index;
    for (size_t i = 0; i < docs.size(); ++i)
      index[doc_id_hex(docs[i].id)] = i;
    size_t above = 0;
    for (const auto& [a, b] : planted) {
      const auto sa = shingle_set(docs[index[doc_id_hex(a)]], 5);
      const auto sb = shingle_set(docs[index[doc_id_hex(b)]], 5);
      if (exact_jaccard(sa, sb) >= 0.8) ++above;
    }
    c.require(above == planted.size(),
              "construction check: some planted pair fell below 0.8 true "
              "Jaccard");
  }

  LshParams params;  // k=128, threshold 0.8, w=5
  params.seed = 99;
  // recall-oriented banding: the est_jaccard confirmation keeps precision
  params.bands = 16;
  params.rows = 8;
  const auto res = near_dedup(docs, params);

  size_t clustered = 0;
  for (const auto& [a, b] : planted) {
    for (const auto& cl : res.clusters) {
      const bool has_a =
          std::find(cl.members.begin(), cl.members.end(), a) != cl.members.end();
      const bool has_b =
          std::find(cl.members.begin(), cl.members.end(), b) != cl.members.end();
      if (has_a && has_b) {
        ++clustered;
        break;
      }
    }
  }
  c.require(clustered >= 18, "only " + std::to_string(clustered) +
                                 "/20 planted pairs clustered");

  size_t originals_kept = 0;
  for (const auto& id : originals)
    for (const auto& d : res.kept)
      if (d.id == id) {
        ++originals_kept;
        break;
      }
  c.require(originals_kept >= 95, "only " + std::to_string(originals_kept) +
                                      "/100 originals kept");

  const auto second = near_dedup(res.kept, params);
  c.require(second.kept.size() == res.kept.size() && second.clusters.empty(),
            "second pass changed the kept set");
  c.finish();
}

void criterion3_tokenizer() {
  Criterion c("3. tokenizer round-trip, vocab size, SoC, reference fixtures");

  const auto model =
      TokenizerModel::load(testsup::gpt2_vocab(), testsup::gpt2_merges());
  c.require(model.vocab_size() == 50257,
            "vocab size " + std::to_string(model.vocab_size()));

  const auto soc = model.encode("SoC");
  c.require(soc.size() == 2 && model.token_string(soc[0]) == "So" &&
                model.token_string(soc[1]) == "C",
            "SoC did not split into So + C");

  // 10,000 random strings round-trip with zero failures
  std::mt19937_64 rng(4242);
  size_t failures = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    const size_t n = rng() % 48;
    for (size_t j = 0; j < n; ++j) {
      char32_t cp = 0;
      switch (rng() % 4) {
        case 0: cp = 0x20 + rng() % 0x5f; break;
        case 1: cp = 0xa0 + rng() % 0x760; break;
        case 2: cp = 0x800 + rng() % 0xf800; break;
        default: cp = 0x10000 + rng() % 0x100000; break;
      }
      if (cp >= 0xd800 && cp <= 0xdfff) cp = 0xfffd;
      if (cp > 0x10ffff) cp = 0x10ffff;
      uni::append_utf8(s, cp);
    }
    if (model.decode(model.encode(s)) != s) ++failures;
  }
  c.require(failures == 0,
            std::to_string(failures) + " round-trip failures out of 10000");

  const auto cases =
      testsup::read_jsonl(testsup::data_dir() / "gpt2_cases.jsonl");
  size_t mismatches = 0, checked = 0;
  for (const auto& cs : cases) {
    ++checked;
    if (model.encode(cs.at("text").get<std::string>()) !=
        cs.at("ids").get<std::vector<uint32_t>>())
      ++mismatches;
  }
  c.require(checked >= 1000, "fixture set too small");
  c.require(mismatches == 0,
            std::to_string(mismatches) + " reference mismatches");
  c.finish();
}

void criterion4_packing_conservation() {
  Criterion c("4. packing conservation (exhaustive 0..200 + randomized)");

  auto check_stream = [&](size_t len, size_t B, size_t T) {
    std::vector<uint32_t> stream(len);
    std::iota(stream.begin(), stream.end(), 0);
    PackConfig cfg;
    cfg.batch_rows = B;
    cfg.context_length = T;
    const auto res = pack(stream, cfg);

    // brute-force oracle
    size_t rows = 0, start = 0;
    while (start + T + 1 <= len) {
      ++rows;
      start += T;
    }
    const uint64_t dropped = rows > 0 ? len - (rows * T + 1) : len;

    size_t got_rows = 0;
    std::vector<int> covered(len, 0);
    std::vector<int> pairs(len > 0 ? len - 1 : 0, 0);
    for (const auto& b : res.batches) {
      if (b.row_stride != T + 1) return false;
      for (size_t r = 0; r < b.rows; ++r) {
        const size_t off = got_rows * T;
        ++got_rows;
        for (size_t j = 0; j <= T; ++j) {
          if (b.row(r)[j] != stream[off + j]) return false;
          covered[off + j] = 1;
        }
        for (size_t j = 0; j < T; ++j) ++pairs[off + j];
      }
    }
    if (got_rows != rows || res.dropped_tail != dropped) return false;
    const size_t covered_n =
        std::count(covered.begin(), covered.end(), 1);
    if (covered_n + res.dropped_tail != len) return false;
    for (size_t i = 0; i + 1 < len; ++i)
      if (pairs[i] != ((i < rows * T) ? 1 : 0)) return false;

    // repacking is byte-identical
    const auto res2 = pack(stream, cfg);
    if (res2.batches.size() != res.batches.size()) return false;
    for (size_t i = 0; i < res.batches.size(); ++i)
      if (res.batches[i].data != res2.batches[i].data) return false;
    return true;
  };

  const struct { size_t B, T; } grid[] = {{1, 2}, {2, 3}, {3, 5}};
  for (const auto& g : grid)
    for (size_t len = 0; len <= 200; ++len)
      c.require(check_stream(len, g.B, g.T),
                "exhaustive case failed at len=" + std::to_string(len) + " B=" +
                    std::to_string(g.B) + " T=" + std::to_string(g.T));

  for (int trial = 0; trial < 50; ++trial) {
    const size_t B = 1 + g_rng() % 8;
    const size_t T = 2 + g_rng() % 64;
    const size_t len = g_rng() % 5000;
    c.require(check_stream(len, B, T),
              "randomized case failed at len=" + std::to_string(len));
  }
  c.finish();
}

void criterion5_proportion() {
  Criterion c("5. proportion arithmetic reproduces the reference figure");
  const std::string printed =
      format_proportion_pct(proportion_pct(70000, 4838384488ull));
  c.require(printed == "0.0014468%", "printed " + printed);
  c.finish();
}

void criterion6_trainer_numerics() {
  Criterion c("6. trainer numerics (init loss, ppl, grad check, causality, adam)");

  // (a) initial validation loss within 2% of ln(V) on several configs
  for (size_t V : {32ul, 257ul, 1000ul}) {
    nn::ModelConfig cfg;
    cfg.n_layers = 2;
    cfg.n_heads = 2;
    cfg.d_head = 8;
    cfg.context_T = 16;
    cfg.vocab_V = V;
    nn::Model model(cfg);
    model.init(1234);
    Rng rng(5);
    std::vector<uint32_t> input(2 * 16), target(2 * 16);
    for (auto& x : input) x = rng.below(V);
    for (auto& x : target) x = rng.below(V);
    const double loss = model.eval_loss(input, target, 2, 16);
    const double lnV = std::log(double(V));
    c.require(std::abs(loss - lnV) / lnV < 0.02,
              "init loss off at V=" + std::to_string(V));
  }

  // (b) perplexity = exp(loss) at every checkpoint of a short run
  {
    nn::ModelConfig mcfg;
    mcfg.n_layers = 1;
    mcfg.n_heads = 2;
    mcfg.d_head = 8;
    mcfg.context_T = 16;
    mcfg.vocab_V = 64;
    std::vector<uint32_t> stream;
    for (size_t i = 0; i < 4 * 2 * 16 + 1; ++i)
      stream.push_back(static_cast<uint32_t>(i % 16));
    PackConfig pcfg;
    pcfg.batch_rows = 2;
    pcfg.context_length = 16;
    auto packed = pack(stream, pcfg);
    TrainJob job;
    job.model_cfg = mcfg;
    job.opt_cfg.grad_accum = 1;
    job.opt_cfg.lr = 1e-3;
    job.schedule.total_steps = 6;
    job.schedule.checkpoint_every = 2;
    job.schedule.seed = 9;
    job.train_batches.assign(packed.batches.begin(), packed.batches.end() - 1);
    job.val_batches.assign(packed.batches.end() - 1, packed.batches.end());
    const auto res = train(job);
    for (const auto& ck : res.checkpoints)
      c.require(std::abs(ck.perplexity - std::exp(ck.val_loss)) <=
                    1e-9 * std::abs(ck.perplexity),
                "perplexity != exp(loss) at step " + std::to_string(ck.step));
  }

  // (c) gradient fidelity on the tiny config
  {
    nn::ModelConfig cfg;
    cfg.n_layers = 2;
    cfg.n_heads = 2;
    cfg.d_head = 4;
    cfg.context_T = 8;
    cfg.vocab_V = 32;
    const double max_rel = grad_check(cfg, 1e-5, 200, 42);
    c.require(max_rel < 1e-4,
              "grad check max relative error " + std::to_string(max_rel));
    g_notes.push_back("criterion 6c: grad check max rel err " +
                      std::to_string(max_rel));
  }

  // (d) exact causality
  {
    nn::ModelConfig cfg;
    cfg.n_layers = 2;
    cfg.n_heads = 2;
    cfg.d_head = 4;
    cfg.context_T = 8;
    cfg.vocab_V = 32;
    nn::Model model(cfg);
    model.init(7);
    Rng rng(3);
    std::vector<uint32_t> ids(8);
    for (auto& x : ids) x = rng.below(cfg.vocab_V);
    const auto logits = model.forward(ids, 1, 8);
    for (size_t j = 1; j < 8; ++j) {
      auto mutated = ids;
      mutated[j] = (mutated[j] + 1) % cfg.vocab_V;
      const auto other = model.forward(mutated, 1, 8);
      for (size_t t = 0; t < j; ++t)
        for (Eigen::Index col = 0; col < logits.cols(); ++col)
          if (logits(t, col) != other(t, col))
            c.require(false, "causality violated at j=" + std::to_string(j));
    }
  }

  // (e) Adam scalar trace against the frozen high-precision reference
  {
    std::ifstream in(testsup::data_dir() / "adam_trace.csv");
    c.require(static_cast<bool>(in), "adam_trace.csv missing");
    std::string line;
    std::getline(in, line);
    OptimizerConfig ocfg;
    ocfg.lr = 1e-3;
    ocfg.beta2 = 0.98;
    ocfg.eps = 1e-7;
    ocfg.weight_decay = 0.0;
    ocfg.grad_accum = 1;
    Adam opt(ocfg);
    nn::Param x{"x", 1, 1, nn::ParamKind::Weight};
    std::vector<nn::Param*> params{&x};
    bool all_match = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const double expect = std::stod(line.substr(line.find(',') + 1));
      x.g(0, 0) = x.w(0, 0) - 3.0;
      opt.step(params);
      if (std::abs(x.w(0, 0) - expect) >
          1e-10 * std::max(1.0, std::abs(expect)))
        all_match = false;
    }
    c.require(all_match, "adam trace deviates beyond 1e-10");
  }
  c.finish();
}

void criterion7_learning_sanity() {
  Criterion c("7. learning sanity: toy model memorizes a repeated pattern");

  const auto tok = TokenizerModel::load(
      testsup::demo_dir() / "tokenizer/vocab.json",
      testsup::demo_dir() / "tokenizer/merges.txt");
  const std::string sentence = "the synthesis tool maps gates.. ";  // 32 bytes
  c.require(sentence.size() == 32, "pattern is not 32 tokens");

  nn::ModelConfig mcfg;
  mcfg.n_layers = 2;
  mcfg.n_heads = 4;
  mcfg.d_head = 16;
  mcfg.context_T = 32;
  mcfg.vocab_V = tok.vocab_size();
  {
    nn::Model probe(mcfg);
    c.require(probe.num_parameters() <= 500000,
              "toy model exceeds 0.5M parameters");
    g_notes.push_back("criterion 7: toy model has " +
                      std::to_string(probe.num_parameters()) + " parameters");
  }

  // stream of the repeated sentence, enough for 12 batches of 8x32
  std::vector<uint32_t> stream;
  while (stream.size() < 12 * 8 * 32 + 1) {
    const auto ids = tok.encode(sentence);
    stream.insert(stream.end(), ids.begin(), ids.end());
  }
  stream.resize(12 * 8 * 32 + 1);
  PackConfig pcfg;
  pcfg.batch_rows = 8;
  pcfg.context_length = 32;
  auto packed = pack(stream, pcfg);

  testsup::TempDir tmp("accept7");
  TrainJob job;
  job.model_cfg = mcfg;
  job.opt_cfg.lr = 1e-3;
  job.opt_cfg.grad_accum = 1;
  job.opt_cfg.weight_decay = 0.0;
  job.schedule.total_steps = 1000;
  job.schedule.checkpoint_every = 20;
  job.schedule.seed = 20240817;
  job.train_batches.assign(packed.batches.begin(), packed.batches.end() - 1);
  job.val_batches.assign(packed.batches.end() - 1, packed.batches.end());
  job.checkpoint_root = tmp.path / "ckpt";

  const auto res = train(job);
  c.require(res.checkpoints.size() >= 5, "not enough checkpoints");
  for (size_t i = 1; i < 5; ++i)
    c.require(res.checkpoints[i].val_loss < res.checkpoints[i - 1].val_loss,
              "val loss not strictly decreasing at checkpoint " +
                  std::to_string(i));

  double best = 1e300;
  size_t best_step = 0;
  for (const auto& ck : res.checkpoints) {
    if (ck.val_loss < best) {
      best = ck.val_loss;
      best_step = ck.step;
    }
  }
  c.require(best < 0.1, "best val loss " + std::to_string(best) +
                            " did not reach 0.1 within 1000 steps");
  g_notes.push_back("criterion 7: best val loss " + std::to_string(best) +
                    " at step " + std::to_string(best_step));

  // temperature-0 generation completes the memorized sentence
  nn::Model model(mcfg);
  char name[32];
  std::snprintf(name, sizeof(name), "step_%06zu", res.checkpoints.back().step);
  load_checkpoint(tmp.path / "ckpt" / name, model, nullptr);
  GenerateConfig gen;
  gen.temperature = 0.0;
  const std::string prompt = "the synthesis tool";
  gen.max_new = sentence.size() - prompt.size();
  const std::string completion = generate(model, tok, prompt, gen);
  c.require(prompt + completion == sentence,
            "generation did not complete the training sentence: '" + prompt +
                completion + "'");
  c.require(c.seconds() < 600.0, "runtime exceeded 10 minutes");
  c.finish();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FORGE_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion8_end_to_end() {
  Criterion c("8. end-to-end demo pipeline, identities and determinism");

  const auto config = testsup::demo_dir() / "config.json";
  testsup::TempDir tmp("accept8");
  const auto ws1 = tmp.path / "ws";        // run, snapshot, rerun in place
  const auto ws2 = tmp.path / "snapshot";  // copy of the first run

  c.require(run_cli("pipeline --config " + config.string() +
                    " --set workspace_dir=" + ws1.string()) == 0,
            "pipeline run 1 failed");
  std::filesystem::copy(ws1, ws2, std::filesystem::copy_options::recursive);
  c.require(run_cli("pipeline --config " + config.string() +
                    " --set workspace_dir=" + ws1.string()) == 0,
            "pipeline run 2 failed");

  // accounting identities
  using nlohmann::json;
  auto load = [&](const std::filesystem::path& p) {
    return json::parse(read_file(p));
  };
  const auto skip = load(ws1 / "ingest/skip_report.json");
  const auto filter_rep = load(ws1 / "filter/report.json");
  const auto dedup_rep = load(ws1 / "dedup/report.json");
  const auto manifest = load(ws1 / "tokenize/manifest.json");
  const auto index = load(ws1 / "pack/index.json");
  const auto tiers = load(ws1 / "pack/tiers.json");

  c.require(filter_rep.at("input").get<uint64_t>() ==
                filter_rep.at("kept").get<uint64_t>() +
                    filter_rep.at("dropped_short").get<uint64_t>() +
                    filter_rep.at("dropped_keyword").get<uint64_t>(),
            "filter accounting identity failed");

  const auto dedup_docs = read_documents_jsonl(ws1 / "dedup/documents.jsonl");
  c.require(dedup_rep.at("input").get<uint64_t>() ==
                dedup_docs.size() + dedup_rep.at("exact_dropped").get<uint64_t>() +
                    dedup_rep.at("near_dropped").get<uint64_t>(),
            "dedup accounting identity failed");

  // every document emitted by ingest passes the sanity checks
  for (const auto& d : read_documents_jsonl(ws1 / "ingest/documents.jsonl"))
    c.require(sanity_check(d).verdict == CleanReport::Verdict::Pass,
              "ingest emitted a document that fails sanity_check: " + d.path);

  // token conservation: manifest total == concat stream == covered + dropped
  const uint64_t stream_tokens = index.at("stream_tokens").get<uint64_t>();
  c.require(manifest.at("total_tokens").get<uint64_t>() == stream_tokens,
            "tokenize/pack token totals disagree");
  PackConfig pc;
  const auto packed = read_hpkb(ws1 / "pack/batches.hpkb", &pc);
  uint64_t rows = 0;
  for (const auto& b : packed.batches) rows += b.rows;
  const uint64_t covered = rows ? rows * pc.context_length + 1 : 0;
  c.require(covered + index.at("dropped_tail").get<uint64_t>() == stream_tokens,
            "covered positions + dropped_tail != stream length");

  // tier chain and per-source sums
  uint64_t prev_total = 0;
  for (const char* tier : {"Small", "Medium", "Large"}) {
    const auto& tj = tiers.at(tier);
    uint64_t sum = 0;
    for (const auto& [src, tok] : tj.at("per_source_tokens").items())
      sum += tok.get<uint64_t>();
    c.require(sum == tj.at("token_total").get<uint64_t>(),
              std::string(tier) + " per-source sums disagree");
    c.require(tj.at("token_total").get<uint64_t>() >= prev_total,
              "tier totals not monotone");
    prev_total = tj.at("token_total").get<uint64_t>();
  }

  // metrics: perplexity column equals exp(val_loss)
  for (const auto& row : read_metrics_csv(ws1 / "train/metrics.csv"))
    c.require(std::abs(row.perplexity - std::exp(row.val_loss)) <=
                  1e-9 * row.perplexity,
              "metrics perplexity != exp(val_loss)");

  // deterministic re-run: data artifacts byte-identical
  for (const char* rel :
       {"ingest/documents.jsonl", "ingest/skip_report.json",
        "filter/documents.jsonl", "filter/verdicts.jsonl",
        "filter/report.json", "dedup/documents.jsonl", "dedup/clusters.json",
        "dedup/report.json", "dedup/signatures.bin",
        "tokenize/manifest.json", "pack/batches.hpkb", "pack/index.json",
        "pack/tiers.json", "generate/sample.txt",
        "report/curves/val_loss.csv", "report/curves/perplexity.csv"}) {
    c.require(read_file(ws1 / rel) == read_file(ws2 / rel),
              std::string("artifact differs between runs: ") + rel);
  }
  const auto ck1 = ws1 / "train/checkpoints", ck2 = ws2 / "train/checkpoints";
  for (const auto& entry : std::filesystem::directory_iterator(ck1)) {
    const auto name = entry.path().filename();
    c.require(read_file(entry.path() / "tensors.bin") ==
                  read_file(ck2 / name / "tensors.bin"),
              "checkpoint tensors differ at " + name.string());
  }

  // exit codes: invalid config -> 2; stage failure -> 1
  c.require(run_cli("pack --config " + config.string() +
                    " --set tokenizer.vocab_file=missing.json") == 2,
            "invalid config did not exit 2");
  c.require(run_cli("generate --config " + config.string() +
                    " --set workspace_dir=" + (tmp.path / "empty").string()) == 1,
            "stage failure did not exit 1");

  c.require(c.seconds() < 600.0, "runtime exceeded 10 minutes");
  c.finish();
}

void criterion9_schedule_validation() {
  Criterion c("9. full-scale schedule constants validate");

  using nlohmann::json;
  auto j = json::parse(read_file(testsup::demo_dir() / "config.json"));
  j["pack"]["batch_rows"] = 125;
  j["pack"]["context_length"] = 2048;
  j["model"] = {{"n_layers", 24},
                {"n_heads", 32},
                {"d_head", 64},
                {"context_T", 2048}};
  j["optimizer"]["grad_accum"] = 25;
  j["schedule"] = {{"total_steps", 30000},
                   {"total_iterations", 750000},
                   {"checkpoint_every", 1000}};
  try {
    const auto cfg = PipelineConfig::load(j, testsup::demo_dir());
    c.require(cfg.pack_stage.pack.batch_rows == 125, "B mismatch");
    c.require(cfg.pack_stage.pack.context_length == 2048, "T mismatch");
    c.require(cfg.schedule.total_steps == 30000, "steps mismatch");
    c.require(cfg.optimizer.grad_accum == 25, "grad_accum mismatch");
  } catch (const std::exception& e) {
    c.require(false, std::string("valid schedule rejected: ") + e.what());
  }

  j["schedule"]["total_iterations"] = 750001;
  bool rejected = false;
  try {
    PipelineConfig::load(j, testsup::demo_dir());
  } catch (const ConfigError&) {
    rejected = true;
  }
  c.require(rejected, "iterations != steps * grad_accum was not rejected");
  c.finish();
}

}  // namespace

int main() {
  std::cout << "forge acceptance suite" << std::endl;
  criterion1_minhash_fidelity();
  criterion2_near_dedup_recall();
  criterion3_tokenizer();
  criterion4_packing_conservation();
  criterion5_proportion();
  criterion6_trainer_numerics();
  criterion7_learning_sanity();
  criterion8_end_to_end();
  criterion9_schedule_validation();

  for (const auto& n : g_notes) std::cout << "  note: " << n << std::endl;
  if (g_failures) {
    std::cout << g_failures << " criterion(s) FAILED" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
