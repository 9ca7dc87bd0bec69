#include "forge/config.hpp"

#include <cstdlib>

namespace forge {

using nlohmann::json;

namespace {

// Pulls a typed field, collecting an error message instead of throwing.
template <typename T>
T get_or(const json& j, const std::string& key, T def,
         std::vector<std::string>& errors, const std::string& prefix) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    errors.push_back(prefix + key + ": wrong type");
    return def;
  }
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  return p.is_absolute() ? p : base / p;
}

}  // namespace

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError({"override '" + assignment + "' is not key=value"});
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json* node = &j;
  size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty())
      throw ConfigError({"override '" + assignment + "' has an empty key"});
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

PipelineConfig PipelineConfig::load(const json& j,
                                    const std::filesystem::path& base_dir) {
  std::vector<std::string> errors;
  PipelineConfig cfg;

  // workspace
  if (j.contains("workspace_dir")) {
    cfg.workspace_dir =
        resolve(base_dir, j.at("workspace_dir").get<std::string>());
  } else if (const char* env = std::getenv("FORGE_WORKSPACE")) {
    cfg.workspace_dir = env;
  } else {
    errors.push_back(
        "workspace_dir: missing (set it or the FORGE_WORKSPACE env var)");
  }
  cfg.seed = get_or<uint64_t>(j, "seed", 0, errors, "");

  // ingest
  const json ing = j.value("ingest", json::object());
  if (!ing.contains("sources") || !ing.at("sources").is_array() ||
      ing.at("sources").empty()) {
    errors.push_back("ingest.sources: at least one source is required");
  } else {
    size_t idx = 0;
    for (const auto& s : ing.at("sources")) {
      const std::string prefix = "ingest.sources[" + std::to_string(idx) + "].";
      SourceSpec spec;
      spec.name = get_or<std::string>(s, "name", "", errors, prefix);
      if (spec.name.empty()) errors.push_back(prefix + "name: required");
      const std::string root =
          get_or<std::string>(s, "root_path", "", errors, prefix);
      if (root.empty()) {
        errors.push_back(prefix + "root_path: required");
      } else {
        spec.root_path = resolve(base_dir, root);
        if (!std::filesystem::is_directory(spec.root_path))
          errors.push_back(prefix + "root_path: not a readable directory: " +
                           spec.root_path.string());
      }
      const std::string cat =
          get_or<std::string>(s, "category", "", errors, prefix);
      try {
        spec.category = category_from_string(cat);
      } catch (const ForgeError&) {
        errors.push_back(prefix +
                         "category: must be one of HdlCode, "
                         "SecurityKnowledge, CuratedNL, WebNL");
      }
      if (s.contains("default_license"))
        spec.default_license = s.at("default_license").get<std::string>();
      cfg.ingest.sources.push_back(std::move(spec));
      ++idx;
    }
  }
  if (ing.contains("license_allowlist"))
    for (const auto& l : ing.at("license_allowlist"))
      cfg.ingest.license_allowlist.insert(l.get<std::string>());
  if (cfg.ingest.license_allowlist.empty())
    errors.push_back("ingest.license_allowlist: must be nonempty");

  // filter
  const json fil = j.value("filter", json::object());
  if (fil.contains("keywords")) {
    cfg.filter.keywords.clear();
    for (const auto& k : fil.at("keywords"))
      cfg.filter.keywords.insert(k.get<std::string>());
  }
  cfg.filter.min_keyword_hits =
      get_or<size_t>(fil, "min_keyword_hits", 3, errors, "filter.");
  cfg.filter.min_chars = get_or<size_t>(fil, "min_chars", 200, errors, "filter.");
  cfg.filter.scrub_nl_punct =
      get_or<bool>(fil, "scrub_nl_punct", true, errors, "filter.");
  if (fil.contains("categories_subject_to_keywords")) {
    cfg.filter.categories_subject_to_keywords.clear();
    for (const auto& c : fil.at("categories_subject_to_keywords")) {
      try {
        cfg.filter.categories_subject_to_keywords.insert(
            category_from_string(c.get<std::string>()));
      } catch (const ForgeError&) {
        errors.push_back("filter.categories_subject_to_keywords: unknown category");
      }
    }
  }
  try {
    cfg.filter.validate();
  } catch (const ForgeError& e) {
    errors.push_back(std::string("filter: ") + e.what());
  }

  // dedup
  const json ded = j.value("dedup", json::object());
  cfg.dedup.num_permutations =
      get_or<size_t>(ded, "num_permutations", 128, errors, "dedup.");
  cfg.dedup.threshold = get_or<double>(ded, "threshold", 0.8, errors, "dedup.");
  cfg.dedup.shingle_width =
      get_or<size_t>(ded, "shingle_width", 5, errors, "dedup.");
  if (cfg.dedup.num_permutations < 2)
    errors.push_back("dedup.num_permutations: must be >= 2");
  if (cfg.dedup.threshold <= 0.0 || cfg.dedup.threshold >= 1.0)
    errors.push_back("dedup.threshold: must lie in (0, 1)");
  if (cfg.dedup.shingle_width < 1)
    errors.push_back("dedup.shingle_width: must be >= 1");

  // tokenizer
  const json tok = j.value("tokenizer", json::object());
  for (const char* field : {"vocab_file", "merges_file"}) {
    const std::string val = get_or<std::string>(tok, field, "", errors, "tokenizer.");
    if (val.empty()) {
      errors.push_back(std::string("tokenizer.") + field + ": required");
      continue;
    }
    auto resolved = resolve(base_dir, val);
    if (!std::filesystem::is_regular_file(resolved))
      errors.push_back(std::string("tokenizer.") + field +
                       ": file not found: " + resolved.string());
    (std::string(field) == "vocab_file" ? cfg.tokenizer.vocab_file
                                        : cfg.tokenizer.merges_file) = resolved;
  }

  // pack
  const json pk = j.value("pack", json::object());
  cfg.pack_stage.pack.batch_rows =
      get_or<size_t>(pk, "batch_rows", 125, errors, "pack.");
  cfg.pack_stage.pack.context_length =
      get_or<size_t>(pk, "context_length", 2048, errors, "pack.");
  cfg.pack_stage.shuffle_docs =
      get_or<bool>(pk, "shuffle_docs", false, errors, "pack.");
  try {
    cfg.pack_stage.tier =
        tier_from_string(get_or<std::string>(pk, "tier", "Large", errors, "pack."));
  } catch (const ForgeError&) {
    errors.push_back("pack.tier: must be Small, Medium or Large");
  }
  try {
    cfg.pack_stage.pack.validate();
  } catch (const ForgeError& e) {
    errors.push_back(std::string("pack: ") + e.what());
  }

  // model
  const json mdl = j.value("model", json::object());
  cfg.model.n_layers = get_or<size_t>(mdl, "n_layers", 24, errors, "model.");
  cfg.model.n_heads = get_or<size_t>(mdl, "n_heads", 32, errors, "model.");
  cfg.model.d_head = get_or<size_t>(mdl, "d_head", 64, errors, "model.");
  cfg.model.context_T =
      get_or<size_t>(mdl, "context_T", 2048, errors, "model.");
  const std::string pos =
      get_or<std::string>(mdl, "positional", "LearnedAbsolute", errors, "model.");
  if (pos == "LearnedAbsolute") {
    cfg.model.positional = nn::Positional::LearnedAbsolute;
  } else if (pos == "Rotary") {
    cfg.model.positional = nn::Positional::Rotary;
  } else {
    errors.push_back("model.positional: must be LearnedAbsolute or Rotary");
  }
  // vocab_V is taken from the loaded tokenizer at train time; a config value
  // is honored if present (used by schedule-only validation).
  cfg.model.vocab_V = get_or<size_t>(mdl, "vocab_V", 50257, errors, "model.");
  try {
    cfg.model.validate();
  } catch (const ForgeError& e) {
    errors.push_back(std::string("model: ") + e.what());
  }

  // optimizer
  const json opt = j.value("optimizer", json::object());
  cfg.optimizer.lr = get_or<double>(opt, "lr", 2e-4, errors, "optimizer.");
  cfg.optimizer.weight_decay =
      get_or<double>(opt, "weight_decay", 0.1, errors, "optimizer.");
  cfg.optimizer.beta1 = get_or<double>(opt, "beta1", 0.9, errors, "optimizer.");
  cfg.optimizer.beta2 = get_or<double>(opt, "beta2", 0.98, errors, "optimizer.");
  cfg.optimizer.eps = get_or<double>(opt, "eps", 1e-7, errors, "optimizer.");
  cfg.optimizer.grad_accum =
      get_or<size_t>(opt, "grad_accum", 25, errors, "optimizer.");
  try {
    cfg.optimizer.validate();
  } catch (const ForgeError& e) {
    errors.push_back(std::string("optimizer: ") + e.what());
  }

  // schedule
  const json sch = j.value("schedule", json::object());
  cfg.schedule.total_steps =
      get_or<size_t>(sch, "total_steps", 30000, errors, "schedule.");
  if (sch.contains("total_iterations"))
    cfg.schedule.total_iterations = sch.at("total_iterations").get<size_t>();
  cfg.schedule.checkpoint_every =
      get_or<size_t>(sch, "checkpoint_every", 1000, errors, "schedule.");
  cfg.schedule.seed = cfg.seed;
  try {
    cfg.schedule.validate(cfg.optimizer.grad_accum);
  } catch (const ForgeError& e) {
    errors.push_back(std::string("schedule: ") + e.what());
  }

  // trainer stage
  const json trn = j.value("trainer", json::object());
  cfg.trainer.val_fraction =
      get_or<double>(trn, "val_fraction", 0.005, errors, "trainer.");
  if (cfg.trainer.val_fraction <= 0.0 || cfg.trainer.val_fraction >= 1.0)
    errors.push_back("trainer.val_fraction: must lie in (0, 1)");
  cfg.trainer.sample_prompt =
      get_or<std::string>(trn, "sample_prompt", "module ", errors, "trainer.");
  cfg.trainer.sample_max_new =
      get_or<size_t>(trn, "sample_max_new", 32, errors, "trainer.");
  cfg.trainer.sample_temperature =
      get_or<double>(trn, "sample_temperature", 0.0, errors, "trainer.");
  cfg.trainer.sample_top_k =
      get_or<size_t>(trn, "sample_top_k", 0, errors, "trainer.");
  if (trn.contains("resume_from"))
    cfg.trainer.resume_from =
        resolve(base_dir, trn.at("resume_from").get<std::string>());

  // emissions (optional)
  if (j.contains("report") && j.at("report").contains("emissions")) {
    const json em = j.at("report").at("emissions");
    EmissionsInputs e;
    e.avg_power_kw =
        get_or<double>(em, "avg_power_kw", 0, errors, "report.emissions.");
    e.hours = get_or<double>(em, "hours", 0, errors, "report.emissions.");
    e.pue = get_or<double>(em, "pue", 1.1, errors, "report.emissions.");
    e.carbon_intensity_kg_per_kwh = get_or<double>(
        em, "carbon_intensity_kg_per_kwh", 0, errors, "report.emissions.");
    if (e.avg_power_kw <= 0 || e.hours <= 0 || e.pue <= 0 ||
        e.carbon_intensity_kg_per_kwh <= 0)
      errors.push_back("report.emissions: all four factors must be positive");
    cfg.emissions = e;
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));

  cfg.config_hash = sha256_hex(j.dump());
  return cfg;
}

PipelineConfig PipelineConfig::load_file(
    const std::filesystem::path& config_path,
    const std::vector<std::string>& overrides) {
  json j;
  try {
    j = json::parse(read_file(config_path));
  } catch (const json::exception& e) {
    throw ConfigError({"config: not valid JSON: " + std::string(e.what())});
  }
  for (const auto& o : overrides) apply_override(j, o);
  return load(j, std::filesystem::absolute(config_path).parent_path());
}

}  // namespace forge
