#include "forge/config.hpp"

#include "doctest.h"
#include "forge/report.hpp"
#include "test_support.hpp"

using namespace forge;
using nlohmann::json;

namespace {

json demo_json() {
  return json::parse(read_file(testsup::demo_dir() / "config.json"));
}

}  // namespace

TEST_CASE("demo config loads and hashes") {
  const auto cfg = PipelineConfig::load(demo_json(), testsup::demo_dir());
  CHECK(cfg.ingest.sources.size() == 11);
  CHECK(cfg.filter.min_chars == 200);
  CHECK(cfg.dedup.num_permutations == 128);
  CHECK(cfg.pack_stage.pack.batch_rows == 4);
  CHECK_FALSE(cfg.config_hash.empty());
}

TEST_CASE("missing vocab file names the field") {
  auto j = demo_json();
  j["tokenizer"]["vocab_file"] = "nope/missing.json";
  try {
    PipelineConfig::load(j, testsup::demo_dir());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    bool found = false;
    for (const auto& msg : e.errors)
      if (msg.find("tokenizer.vocab_file") != std::string::npos) found = true;
    CHECK(found);
  }
}

TEST_CASE("paper-scale schedule constants validate") {
  auto j = demo_json();
  j["pack"]["batch_rows"] = 125;
  j["pack"]["context_length"] = 2048;
  j["model"] = {{"n_layers", 24}, {"n_heads", 32}, {"d_head", 64},
                {"context_T", 2048}};
  j["optimizer"]["grad_accum"] = 25;
  j["schedule"] = {{"total_steps", 30000}, {"total_iterations", 750000},
                   {"checkpoint_every", 1000}};
  const auto cfg = PipelineConfig::load(j, testsup::demo_dir());
  CHECK(cfg.schedule.total_steps == 30000);
  CHECK(*cfg.schedule.total_iterations == 750000);
  CHECK(cfg.optimizer.grad_accum == 25);
  CHECK(cfg.model.d_model() == 2048);
}

TEST_CASE("inconsistent iterations are rejected") {
  auto j = demo_json();
  j["optimizer"]["grad_accum"] = 25;
  j["schedule"] = {{"total_steps", 30000}, {"total_iterations", 750001},
                   {"checkpoint_every", 1000}};
  try {
    PipelineConfig::load(j, testsup::demo_dir());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    bool found = false;
    for (const auto& msg : e.errors)
      if (msg.find("total_iterations") != std::string::npos) found = true;
    CHECK(found);
  }
}

TEST_CASE("overrides take dotted paths") {
  auto j = demo_json();
  apply_override(j, "pack.tier=Small");
  apply_override(j, "optimizer.lr=0.01");
  apply_override(j, "trainer.sample_prompt=entity ");
  const auto cfg = PipelineConfig::load(j, testsup::demo_dir());
  CHECK(cfg.pack_stage.tier == Tier::Small);
  CHECK(cfg.optimizer.lr == doctest::Approx(0.01));
  CHECK(cfg.trainer.sample_prompt == "entity ");
  CHECK_THROWS_AS(apply_override(j, "no-equals-sign"), ConfigError);
}

TEST_CASE("several errors report together") {
  auto j = demo_json();
  j["tokenizer"]["vocab_file"] = "missing.json";
  j["dedup"]["threshold"] = 1.5;
  j.erase("workspace_dir");
  ::unsetenv("FORGE_WORKSPACE");
  try {
    PipelineConfig::load(j, testsup::demo_dir());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.errors.size() >= 3);
  }
}

TEST_CASE("FORGE_WORKSPACE env fallback") {
  auto j = demo_json();
  j.erase("workspace_dir");
  ::setenv("FORGE_WORKSPACE", "/tmp/forge_ws_env", 1);
  const auto cfg = PipelineConfig::load(j, testsup::demo_dir());
  CHECK(cfg.workspace_dir == "/tmp/forge_ws_env");
  ::unsetenv("FORGE_WORKSPACE");
}

TEST_CASE("emissions formula and validation") {
  EmissionsInputs e;
  e.avg_power_kw = 1.0;
  e.hours = 1.0;
  e.pue = 1.0;
  e.carbon_intensity_kg_per_kwh = 0.4;
  CHECK(emissions_kg_co2e(e) == doctest::Approx(0.4));

  // multilinearity: scaling any factor scales the output
  for (int which = 0; which < 4; ++which) {
    EmissionsInputs s = e;
    const double c = 2.5;
    (which == 0   ? s.avg_power_kw
     : which == 1 ? s.hours
     : which == 2 ? s.pue
                  : s.carbon_intensity_kg_per_kwh) *= c;
    CHECK(emissions_kg_co2e(s) == doctest::Approx(c * emissions_kg_co2e(e)));
  }

  e.hours = 0;
  CHECK_THROWS_AS(emissions_kg_co2e(e), ForgeError);

  EmissionsInputs paperish;
  paperish.avg_power_kw = 0.7;
  paperish.hours = 194.72;
  paperish.pue = 1.1;
  paperish.carbon_intensity_kg_per_kwh = 0.4;
  CHECK(emissions_kg_co2e(paperish) ==
        doctest::Approx(0.7 * 194.72 * 1.1 * 0.4));
}
