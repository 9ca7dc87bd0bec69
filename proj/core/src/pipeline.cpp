#include "forge/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "forge/ingest.hpp"
#include "forge/report.hpp"

namespace forge {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

void write_provenance(const PipelineConfig& cfg, const std::string& stage,
                      const json& input_hashes) {
  json p;
  p["stage"] = stage;
  p["config_hash"] = cfg.config_hash;
  p["inputs"] = input_hashes;
  p["tool"] = "forge";
  p["version"] = kForgeVersion;
  write_file(cfg.workspace_dir / stage / "provenance.json", p.dump(1));
}

std::string file_hash(const fs::path& p) { return sha256_hex(read_file(p)); }

void write_json(const fs::path& p, const json& j) {
  write_file(p, j.dump(1) + "\n");
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

TokenizerModel load_tokenizer(const PipelineConfig& cfg) {
  return TokenizerModel::load(cfg.tokenizer.vocab_file,
                              cfg.tokenizer.merges_file);
}

CorpusManifest read_manifest(const PipelineConfig& cfg) {
  const json m = read_json(cfg.workspace_dir / "tokenize/manifest.json");
  CorpusManifest manifest;
  for (const auto& [name, acc] : m.at("sources").items()) {
    SourceAccount a;
    a.category = category_from_string(acc.at("category").get<std::string>());
    a.documents = acc.at("documents").get<uint64_t>();
    a.tokens = acc.at("tokens").get<uint64_t>();
    manifest[name] = a;
  }
  return manifest;
}

fs::path latest_checkpoint(const fs::path& root) {
  fs::path best;
  size_t best_step = 0;
  bool found = false;
  if (!fs::is_directory(root))
    throw ForgeError("no checkpoints under " + root.string());
  for (const auto& entry : fs::directory_iterator(root)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("step_", 0) != 0) continue;
    const size_t step = std::stoul(name.substr(5));
    if (!found || step >= best_step) {
      best = entry.path();
      best_step = step;
      found = true;
    }
  }
  if (!found) throw ForgeError("no checkpoints under " + root.string());
  return best;
}

}  // namespace

json run_ingest(const PipelineConfig& cfg) {
  std::vector<Document> kept;
  SkipReport skips;
  json source_hashes = json::object();

  for (const auto& spec : cfg.ingest.sources) {
    auto docs = scan_source(spec, skips);

    std::string digest;
    for (const auto& d : docs) digest += doc_id_hex(d.id) + d.path + "\n";
    source_hashes[spec.name] = sha256_hex(digest);

    for (auto& d : docs) {
      const auto report = sanity_check(d);
      if (report.verdict != CleanReport::Verdict::Pass) {
        for (const auto& r : report.reasons) skips.add("sanity: " + r);
        continue;
      }
      if (!license_filter(d, cfg.ingest.license_allowlist)) {
        skips.add("license");
        continue;
      }
      kept.push_back(std::move(d));
    }
  }

  const auto out_dir = cfg.workspace_dir / "ingest";
  write_documents_jsonl(out_dir / "documents.jsonl", kept);
  json skip_json;
  skip_json["skipped"] = skips.skipped;
  skip_json["reasons"] = skips.reasons;
  skip_json["config_hash"] = cfg.config_hash;
  write_json(out_dir / "skip_report.json", skip_json);
  write_provenance(cfg, "ingest", source_hashes);

  json summary;
  summary["stage"] = "ingest";
  summary["documents"] = kept.size();
  summary["skipped"] = skips.skipped;
  return summary;
}

json run_filter(const PipelineConfig& cfg) {
  const auto in_path = cfg.workspace_dir / "ingest/documents.jsonl";
  const auto docs = read_documents_jsonl(in_path);

  std::vector<Document> kept;
  fs::create_directories(cfg.workspace_dir / "filter");
  std::ofstream verdicts(cfg.workspace_dir / "filter/verdicts.jsonl",
                         std::ios::trunc);
  if (!verdicts) throw ForgeError("cannot open verdicts.jsonl for write");

  uint64_t dropped_short = 0, dropped_keyword = 0;
  for (const auto& doc : docs) {
    auto [out, verdict] = filter_pipeline(doc, cfg.filter);
    json v;
    v["id"] = doc_id_hex(doc.id);
    v["kept"] = verdict.kept;
    v["stage"] = to_string(verdict.stage);
    v["keyword_hits"] = verdict.keyword_hits;
    verdicts << v.dump() << '\n';
    if (out) {
      kept.push_back(std::move(*out));
    } else if (verdict.stage == FilterVerdict::Stage::Short) {
      ++dropped_short;
    } else {
      ++dropped_keyword;
    }
  }
  verdicts.close();

  write_documents_jsonl(cfg.workspace_dir / "filter/documents.jsonl", kept);
  json report;
  report["input"] = docs.size();
  report["kept"] = kept.size();
  report["dropped_short"] = dropped_short;
  report["dropped_keyword"] = dropped_keyword;
  report["config_hash"] = cfg.config_hash;
  write_json(cfg.workspace_dir / "filter/report.json", report);
  write_provenance(cfg, "filter", {{"ingest/documents.jsonl", file_hash(in_path)}});

  report["stage"] = "filter";
  return report;
}

json run_dedup(const PipelineConfig& cfg) {
  const auto in_path = cfg.workspace_dir / "filter/documents.jsonl";
  const auto docs = read_documents_jsonl(in_path);

  auto [exact_kept, exact_dropped] = exact_dedup(docs);

  LshParams params;
  params.k = cfg.dedup.num_permutations;
  params.threshold = cfg.dedup.threshold;
  params.shingle_width = cfg.dedup.shingle_width;
  params.seed = cfg.seed;
  auto result = near_dedup(exact_kept, params);

  const auto out_dir = cfg.workspace_dir / "dedup";
  write_documents_jsonl(out_dir / "documents.jsonl", result.kept);
  write_signatures(out_dir / "signatures.bin", result.signatures);

  json clusters = json::array();
  for (const auto& c : result.clusters) {
    json cj;
    cj["canonical"] = doc_id_hex(c.canonical);
    cj["members"] = json::array();
    for (const auto& m : c.members) cj["members"].push_back(doc_id_hex(m));
    clusters.push_back(std::move(cj));
  }
  write_json(out_dir / "clusters.json", clusters);

  json report;
  report["input"] = docs.size();
  report["exact_dropped"] = exact_dropped;
  report["near_dropped"] = result.near_dropped;
  report["clusters"] = result.clusters.size();
  report["config_hash"] = cfg.config_hash;
  write_json(out_dir / "report.json", report);
  write_provenance(cfg, "dedup",
                   {{"filter/documents.jsonl", file_hash(in_path)}});

  report["stage"] = "dedup";
  return report;
}

json run_tokenize(const PipelineConfig& cfg) {
  const auto in_path = cfg.workspace_dir / "dedup/documents.jsonl";
  const auto docs = read_documents_jsonl(in_path);
  const auto tokenizer = load_tokenizer(cfg);

  CorpusManifest manifest;
  for (const auto& spec : cfg.ingest.sources) {
    manifest[spec.name].category = spec.category;
  }
  uint64_t total_tokens = 0;
  for (const auto& d : docs) {
    auto& acc = manifest[d.source];
    acc.category = d.category;
    acc.documents += 1;
    const uint64_t tokens = tokenizer.encode(d.text).size() + 1;  // +EOS
    acc.tokens += tokens;
    total_tokens += tokens;
  }

  json m;
  m["sources"] = json::object();
  for (const auto& [name, acc] : manifest) {
    json a;
    a["category"] = to_string(acc.category);
    a["documents"] = acc.documents;
    a["tokens"] = acc.tokens;
    m["sources"][name] = a;
  }
  m["total_tokens"] = total_tokens;
  m["total_documents"] = docs.size();
  m["vocab_size"] = tokenizer.vocab_size();
  if (!docs.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", words_per_token(docs, tokenizer));
    m["words_per_token"] = buf;
  }
  m["config_hash"] = cfg.config_hash;
  write_json(cfg.workspace_dir / "tokenize/manifest.json", m);
  write_provenance(cfg, "tokenize",
                   {{"dedup/documents.jsonl", file_hash(in_path)},
                    {"vocab_file", file_hash(cfg.tokenizer.vocab_file)},
                    {"merges_file", file_hash(cfg.tokenizer.merges_file)}});

  json summary;
  summary["stage"] = "tokenize";
  summary["total_tokens"] = total_tokens;
  summary["documents"] = docs.size();
  return summary;
}

json run_pack(const PipelineConfig& cfg) {
  const auto in_path = cfg.workspace_dir / "dedup/documents.jsonl";
  auto docs = read_documents_jsonl(in_path);
  const auto tokenizer = load_tokenizer(cfg);

  // tier selection
  const auto member = tier_categories(cfg.pack_stage.tier);
  std::erase_if(docs, [&](const Document& d) { return !member.count(d.category); });

  if (cfg.pack_stage.shuffle_docs)
    shuffle_documents(docs, cfg.seed ^ 0x5eedc0ffee123456ull);

  const auto stream = concat_stream(docs, tokenizer);
  auto result = pack(stream, cfg.pack_stage.pack);

  const auto out_dir = cfg.workspace_dir / "pack";
  write_hpkb(out_dir / "batches.hpkb", result, cfg.pack_stage.pack,
             tokenizer.vocab_size());

  json index;
  index["num_batches"] = result.batches.size();
  index["last_batch_rows"] = result.last_batch_rows;
  index["dropped_tail"] = result.dropped_tail;
  index["vocab_size"] = tokenizer.vocab_size();
  index["stream_tokens"] = stream.size();
  index["tier"] = to_string(cfg.pack_stage.tier);
  index["documents"] = docs.size();
  index["config_hash"] = cfg.config_hash;
  write_json(out_dir / "index.json", index);

  // tier manifests from the tokenize accounting
  const auto manifest = read_manifest(cfg);
  json tiers = json::object();
  for (Tier t : {Tier::Small, Tier::Medium, Tier::Large}) {
    const auto tm = tier_assign(manifest, t);
    json tj;
    tj["member_categories"] = json::array();
    for (auto c : tm.member_categories)
      tj["member_categories"].push_back(to_string(c));
    tj["token_total"] = tm.token_total;
    tj["per_source_tokens"] = tm.per_source_tokens;
    tj["reference_full_scale_tokens"] =
        kReferenceTierTokens[static_cast<int>(t)];
    tiers[to_string(t)] = tj;
  }
  tiers["reference_note"] =
      "reference_full_scale_tokens are the published full-scale corpus "
      "sizes; documentation only, not targets for this build";
  tiers["config_hash"] = cfg.config_hash;
  write_json(out_dir / "tiers.json", tiers);
  write_provenance(cfg, "pack",
                   {{"dedup/documents.jsonl", file_hash(in_path)},
                    {"tokenize/manifest.json",
                     file_hash(cfg.workspace_dir / "tokenize/manifest.json")}});

  json summary;
  summary["stage"] = "pack";
  summary["num_batches"] = result.batches.size();
  summary["dropped_tail"] = result.dropped_tail;
  summary["stream_tokens"] = stream.size();
  return summary;
}

json run_train(const PipelineConfig& cfg) {
  const auto hpkb_path = cfg.workspace_dir / "pack/batches.hpkb";
  PackConfig pack_cfg;
  auto packed = read_hpkb(hpkb_path, &pack_cfg);
  if (packed.batches.size() < 2)
    throw ForgeError("need at least 2 packed batches to split train/val");

  const auto tokenizer = load_tokenizer(cfg);

  TrainJob job;
  job.model_cfg = cfg.model;
  job.model_cfg.vocab_V = tokenizer.vocab_size();
  job.opt_cfg = cfg.optimizer;
  job.schedule = cfg.schedule;
  job.schedule.seed = cfg.seed;

  // validation split: the tail max(1, round(frac * N)) batches
  const size_t n = packed.batches.size();
  size_t val_count = static_cast<size_t>(
      std::llround(cfg.trainer.val_fraction * static_cast<double>(n)));
  val_count = std::min(std::max<size_t>(val_count, 1), n - 1);
  job.train_batches.assign(packed.batches.begin(),
                           packed.batches.end() - val_count);
  job.val_batches.assign(packed.batches.end() - val_count,
                         packed.batches.end());

  job.checkpoint_root = cfg.workspace_dir / "train/checkpoints";
  job.metrics_csv = cfg.workspace_dir / "train/metrics.csv";
  job.config_hash = cfg.config_hash;
  job.tokenizer = &tokenizer;
  job.sample_prompt = cfg.trainer.sample_prompt;
  job.sample_cfg.max_new = cfg.trainer.sample_max_new;
  job.sample_cfg.temperature = cfg.trainer.sample_temperature;
  job.sample_cfg.top_k = cfg.trainer.sample_top_k;
  job.sample_cfg.seed = cfg.seed;
  job.resume_from = cfg.trainer.resume_from;

  auto result = train(job);

  json ckpts = json::array();
  for (const auto& c : result.checkpoints) {
    json cj;
    cj["step"] = c.step;
    cj["val_loss"] = c.val_loss;
    cj["perplexity"] = c.perplexity;
    ckpts.push_back(cj);
  }
  json summary;
  summary["stage"] = "train";
  summary["steps"] = result.steps_run;
  summary["checkpoints"] = ckpts;
  write_json(cfg.workspace_dir / "train/summary.json", summary);
  write_provenance(cfg, "train",
                   {{"pack/batches.hpkb", file_hash(hpkb_path)}});
  return summary;
}

json run_generate(const PipelineConfig& cfg, const std::string& prompt_override) {
  const auto tokenizer = load_tokenizer(cfg);
  const auto ckpt = latest_checkpoint(cfg.workspace_dir / "train/checkpoints");

  nn::ModelConfig mc = cfg.model;
  mc.vocab_V = tokenizer.vocab_size();
  nn::Model model(mc);
  Adam opt{cfg.optimizer};
  const auto meta = load_checkpoint(ckpt, model, &opt);

  const std::string prompt =
      prompt_override.empty() ? cfg.trainer.sample_prompt : prompt_override;
  GenerateConfig gen;
  gen.max_new = cfg.trainer.sample_max_new;
  gen.temperature = cfg.trainer.sample_temperature;
  gen.top_k = cfg.trainer.sample_top_k;
  gen.seed = cfg.seed;
  const std::string continuation = generate(model, tokenizer, prompt, gen);

  const auto out_dir = cfg.workspace_dir / "generate";
  write_file(out_dir / "sample.txt", continuation);
  json j;
  j["prompt"] = prompt;
  j["continuation"] = continuation;
  j["checkpoint_step"] = meta.step;
  j["config_hash"] = cfg.config_hash;
  write_json(out_dir / "sample.json", j);
  write_provenance(cfg, "generate",
                   {{"checkpoint", file_hash(ckpt / "tensors.bin")}});

  j["stage"] = "generate";
  return j;
}

json run_stats(const PipelineConfig& cfg) { return stats_report(cfg); }

json run_report(const PipelineConfig& cfg) {
  json report = stats_report(cfg);
  const auto out_dir = cfg.workspace_dir / "report";
  write_json(out_dir / "report.json", report);
  export_curves(cfg.workspace_dir / "train/metrics.csv", out_dir / "curves");
  write_provenance(cfg, "report",
                   {{"train/metrics.csv",
                     file_hash(cfg.workspace_dir / "train/metrics.csv")}});
  json summary;
  summary["stage"] = "report";
  summary["kg_co2e"] = report.contains("emissions")
                           ? report["emissions"]["kg_co2e"]
                           : json();
  return summary;
}

json run_all(const PipelineConfig& cfg) {
  json stages = json::array();
  stages.push_back(run_ingest(cfg));
  stages.push_back(run_filter(cfg));
  stages.push_back(run_dedup(cfg));
  stages.push_back(run_tokenize(cfg));
  stages.push_back(run_pack(cfg));
  stages.push_back(run_train(cfg));
  stages.push_back(run_generate(cfg));
  stages.push_back(run_report(cfg));
  json summary;
  summary["stage"] = "pipeline";
  summary["stages"] = stages;
  return summary;
}

}  // namespace forge
