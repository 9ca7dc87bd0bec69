#include "forge/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "forge/pack.hpp"

namespace forge {

using nlohmann::json;

double emissions_kg_co2e(const EmissionsInputs& e) {
  if (e.avg_power_kw <= 0 || e.hours <= 0 || e.pue <= 0 ||
      e.carbon_intensity_kg_per_kwh <= 0)
    throw ForgeError("emissions inputs must all be positive");
  return e.avg_power_kw * e.hours * e.pue * e.carbon_intensity_kg_per_kwh;
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ForgeError("cannot open metrics csv: " + p.string());
  std::vector<MetricsRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("step,", 0) != 0)
        throw ForgeError("malformed metrics csv header");
      continue;
    }
    MetricsRow r;
    std::istringstream ss(line);
    std::string field;
    auto next = [&]() {
      if (!std::getline(ss, field, ','))
        throw ForgeError("malformed metrics csv row: " + line);
      return field;
    };
    r.step = std::stoull(next());
    r.train_loss = std::stod(next());
    r.val_loss = std::stod(next());
    r.perplexity = std::stod(next());
    r.tokens_per_sec = std::stod(next());
    r.batches_per_sec = std::stod(next());
    rows.push_back(r);
  }
  return rows;
}

namespace {

std::string svg_line_chart(const std::string& title,
                           const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  const double W = 640, H = 400, ml = 60, mr = 20, mt = 36, mb = 40;
  double xmin = xs.front(), xmax = xs.back();
  if (xmax == xmin) xmax = xmin + 1;
  double ymin = ys.front(), ymax = ys.front();
  for (double y : ys) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (ymax == ymin) {
    ymax += 1;
    ymin -= 1;
  }
  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double y) {
    return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", ymin);
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", ymax);
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << buf << "</text>\n";

  svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
         "points=\"";
  for (size_t i = 0; i < xs.size(); ++i)
    svg << px(xs[i]) << ',' << py(ys[i]) << ' ';
  svg << "\"/>\n";
  for (size_t i = 0; i < xs.size(); ++i)
    svg << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i])
        << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

void export_curves(const std::filesystem::path& metrics_csv,
                   const std::filesystem::path& out_dir) {
  const auto rows = read_metrics_csv(metrics_csv);
  if (rows.empty()) throw ForgeError("metrics csv has no data rows");

  std::vector<double> steps, val_loss, ppl;
  for (const auto& r : rows) {
    steps.push_back(static_cast<double>(r.step));
    val_loss.push_back(r.val_loss);
    ppl.push_back(r.perplexity);
  }

  std::ostringstream loss_csv, ppl_csv;
  loss_csv << "step,val_loss\n";
  ppl_csv << "step,perplexity\n";
  loss_csv.precision(17);
  ppl_csv.precision(17);
  for (const auto& r : rows) {
    loss_csv << r.step << ',' << r.val_loss << '\n';
    ppl_csv << r.step << ',' << r.perplexity << '\n';
  }
  write_file(out_dir / "val_loss.csv", loss_csv.str());
  write_file(out_dir / "perplexity.csv", ppl_csv.str());
  write_file(out_dir / "val_loss.svg",
             svg_line_chart("validation loss", steps, val_loss));
  write_file(out_dir / "perplexity.svg",
             svg_line_chart("validation perplexity", steps, ppl));
}

json stats_report(const PipelineConfig& cfg) {
  const auto ws = cfg.workspace_dir;
  json report;
  report["config_hash"] = cfg.config_hash;

  // tier accounting
  const json tiers = json::parse(read_file(ws / "pack/tiers.json"));
  report["tiers"] = tiers;

  // per-source proportions within each tier
  json proportions = json::object();
  for (const char* tier : {"Small", "Medium", "Large"}) {
    const auto& tj = tiers.at(tier);
    const uint64_t total = tj.at("token_total").get<uint64_t>();
    json per = json::object();
    if (total > 0)
      for (const auto& [src, tok] : tj.at("per_source_tokens").items())
        per[src] = format_proportion_pct(
            proportion_pct(tok.get<uint64_t>(), total));
    proportions[tier] = per;
  }
  report["per_source_proportions"] = proportions;

  // drop accounting
  json drops;
  drops["ingest"] = json::parse(read_file(ws / "ingest/skip_report.json"));
  drops["filter"] = json::parse(read_file(ws / "filter/report.json"));
  drops["dedup"] = json::parse(read_file(ws / "dedup/report.json"));
  report["drops"] = drops;

  // measured throughput from the latest train run
  if (std::filesystem::exists(ws / "train/metrics.csv")) {
    const auto rows = read_metrics_csv(ws / "train/metrics.csv");
    if (!rows.empty()) {
      json t;
      t["tokens_per_sec"] = rows.back().tokens_per_sec;
      t["batches_per_sec"] = rows.back().batches_per_sec;
      t["at_step"] = rows.back().step;
      report["measured_throughput"] = t;
    }
  }

  // published full-scale reference figures; not targets for this build
  json ref;
  ref["tier_tokens"] = {kReferenceTierTokens[0], kReferenceTierTokens[1],
                        kReferenceTierTokens[2]};
  ref["model_shape_layers_heads_dhead_context"] = {
      nn::kFullScaleModelShape[0], nn::kFullScaleModelShape[1],
      nn::kFullScaleModelShape[2], nn::kFullScaleModelShape[3]};
  ref["cwe_tokens"] = 70000;
  ref["cwe_proportion_of_small"] = format_proportion_pct(
      proportion_pct(70000, kReferenceTierTokens[0]));
  ref["throughput_batches_per_sec"] = 1.07;
  ref["throughput_tokens_per_sec"] = 11000;
  ref["note"] =
      "published full-scale reference figures, shown for context only; "
      "they are not targets or claims of this desk-scale build";
  report["full_scale_reference"] = ref;

  if (cfg.emissions) {
    json e;
    e["avg_power_kw"] = cfg.emissions->avg_power_kw;
    e["hours"] = cfg.emissions->hours;
    e["pue"] = cfg.emissions->pue;
    e["carbon_intensity_kg_per_kwh"] =
        cfg.emissions->carbon_intensity_kg_per_kwh;
    e["kg_co2e"] = emissions_kg_co2e(*cfg.emissions);
    report["emissions"] = e;
  }
  return report;
}

}  // namespace forge
