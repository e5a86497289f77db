// Command-line driver: adjacency export, statement materialization and the
// full real-vs-synthetic comparison pipeline.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "entsim/entsim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitPairing = 2;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw entsim::InputDomainError("cannot open '" + path + "' for reading");
  return in;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw entsim::InputDomainError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw entsim::InputDomainError("failed writing '" + path.string() + "'");
}

entsim::RegionLayer read_layer(const std::string& path) {
  auto in = open_in(path);
  return entsim::load_region_layer(in);
}

entsim::TBoxConfig read_tbox(const std::string& path, const entsim::RegionLayer& layer) {
  auto in = open_in(path);
  auto tbox = entsim::load_tbox(in);
  tbox.merge_hierarchy(layer.hierarchy());
  tbox.validate();
  return tbox;
}

std::vector<entsim::Trajectory> read_trajectory_file(const std::string& path) {
  auto in = open_in(path);
  return entsim::read_trajectories(in);
}

void report_warnings(const entsim::AdjacencyGraph& g) {
  for (const auto& w : g.warnings())
    std::cerr << "warning: " << w.region_a << " / " << w.region_b << ": " << w.message << '\n';
}

/// Adjacency from an edge-list file when given, from geometry otherwise.
entsim::AdjacencyGraph resolve_adjacency(const entsim::RegionLayer& layer,
                                         const std::string& adjacency_path, bool corner_touch,
                                         double eps) {
  std::set<std::string> ids;
  for (const auto& r : layer.regions()) ids.insert(r.id);
  if (!adjacency_path.empty()) {
    auto in = open_in(adjacency_path);
    return entsim::read_adjacency(in).with_nodes(ids);
  }
  auto g = entsim::compute_adjacency(layer, corner_touch, eps);
  report_warnings(g);
  return g;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw entsim::InputDomainError("expected true or false, got '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entailment-based trajectory similarity"};
  app.require_subcommand(1);

  std::string regions_path;
  std::string out_path;
  double eps = entsim::kDefaultEps;

  auto* adj = app.add_subcommand("adjacency", "Build the region adjacency graph and export it");
  std::string corner_touch = "true";
  adj->add_option("--regions", regions_path, "GeoJSON region layer")->required();
  adj->add_option("--corner-touch", corner_touch, "Count single-point contacts (true|false)")
      ->check(CLI::IsMember({"true", "false"}));
  adj->add_option("--eps", eps, "Contact tolerance in degrees");
  adj->add_option("--out", out_path, "Edge-list CSV")->required();

  auto* entail = app.add_subcommand("entail", "Materialize statement sets per trajectory");
  std::string adjacency_path;
  std::string tbox_path;
  std::string trajectories_path;
  bool from_geometry = false;
  entail->add_option("--regions", regions_path, "GeoJSON region layer")->required();
  auto* adj_opt = entail->add_option("--adjacency", adjacency_path, "Edge-list CSV");
  auto* geo_flag = entail->add_flag("--from-geometry", from_geometry,
                                    "Derive adjacency from the region geometry");
  adj_opt->excludes(geo_flag);
  entail->add_option("--tbox", tbox_path, "TBox config (JSON)")->required();
  entail->add_option("--trajectories", trajectories_path, "Trajectory CSV")->required();
  entail->add_option("--eps", eps, "Boundary tolerance in degrees");
  entail->add_option("--out", out_path, "Triples output")->required();

  auto* compare = app.add_subcommand("compare", "Compare real and synthetic trajectories");
  std::string real_path;
  std::string synthetic_path;
  std::string metric = "geodesic";
  std::string hausdorff = "directed";
  std::string risk_attribute = "crime_rate";
  std::string risk_weighting = "distinct";
  unsigned threads = 1;
  compare->add_option("--regions", regions_path, "GeoJSON region layer")->required();
  compare->add_option("--tbox", tbox_path, "TBox config (JSON)")->required();
  compare->add_option("--real", real_path, "Ground-truth trajectory CSV")->required();
  compare->add_option("--synthetic", synthetic_path, "Synthetic trajectory CSV")->required();
  compare->add_option("--adjacency", adjacency_path,
                      "Edge-list CSV (default: derive from geometry)");
  compare->add_option("--metric", metric)->check(CLI::IsMember({"geodesic", "planar"}));
  compare->add_option("--hausdorff", hausdorff)->check(CLI::IsMember({"directed", "symmetric"}));
  compare->add_option("--risk-attribute", risk_attribute, "Region attribute averaged as risk");
  compare->add_option("--risk-weighting", risk_weighting)
      ->check(CLI::IsMember({"distinct", "per-fix"}));
  compare->add_option("--threads", threads, "Worker threads (0 = all cores)");
  compare->add_option("--eps", eps, "Boundary tolerance in degrees");
  compare->add_option("--out", out_path, "Report (.csv or .jsonl)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*adj) {
      const auto layer = read_layer(regions_path);
      const auto g = entsim::compute_adjacency(layer, parse_bool(corner_touch), eps);
      report_warnings(g);
      std::ostringstream doc;
      entsim::write_adjacency(doc, g);
      write_file(out_path, doc.str());
    } else if (*entail) {
      if (adjacency_path.empty() && !from_geometry)
        throw entsim::InputDomainError("entail needs --adjacency <csv> or --from-geometry");
      const auto layer = read_layer(regions_path);
      const auto tbox = read_tbox(tbox_path, layer);
      const auto graph = resolve_adjacency(layer, adjacency_path, tbox.corner_touch, eps);
      auto trajectories = read_trajectory_file(trajectories_path);
      std::sort(trajectories.begin(), trajectories.end(),
                [](const auto& a, const auto& b) { return a.id() < b.id(); });
      std::ostringstream doc;
      for (const auto& t : trajectories) {
        doc << "# " << t.id() << '\n';
        entsim::write_statements(doc, entsim::entail_trajectory(t, layer, graph, tbox, eps));
      }
      write_file(out_path, doc.str());
    } else if (*compare) {
      const auto layer = read_layer(regions_path);
      const auto tbox = read_tbox(tbox_path, layer);
      const auto graph = resolve_adjacency(layer, adjacency_path, tbox.corner_touch, eps);
      const auto real = read_trajectory_file(real_path);
      const auto synthetic = read_trajectory_file(synthetic_path);
      const auto pairs = entsim::pair_by_id(real, synthetic);

      entsim::ComparisonContext ctx{
          .layer = layer,
          .adjacency = graph,
          .tbox = tbox,
          .mode = metric == "planar" ? entsim::MetricMode::planar : entsim::MetricMode::geodesic,
          .hausdorff = hausdorff == "symmetric" ? entsim::HausdorffKind::symmetric
                                                : entsim::HausdorffKind::directed,
          .risk = {risk_attribute, risk_weighting == "per-fix"
                                       ? entsim::RiskWeighting::per_fix
                                       : entsim::RiskWeighting::distinct_regions},
          .eps = eps,
      };
      const entsim::Report report(entsim::compare_batch(pairs, ctx, threads));

      const fs::path out(out_path);
      const auto format = out.extension() == ".jsonl" ? entsim::ReportFormat::jsonl
                                                      : entsim::ReportFormat::csv;
      const auto emitted = entsim::emit_report(report, format);
      write_file(out, emitted.body);
      if (format == entsim::ReportFormat::csv) {
        fs::path summary = out;
        summary.replace_extension(".summary.csv");
        write_file(summary, emitted.summary);
      }
      const auto& s = report.summary();
      std::cerr << s.total_pairs << " pairs, " << s.pairs_with_out_of_layer
                << " with out-of-layer fixes, " << s.undefined_risk_pairs
                << " with undefined risk\n";
    }
  } catch (const entsim::PairingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPairing;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
