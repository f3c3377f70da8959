// Command-line front end: compute, atlas build|verify, tables.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mod3gal/atlas_verify.hpp"
#include "mod3gal/report.hpp"
#include "mod3gal/tables.hpp"

#ifndef MOD3GAL_DATA_DIR
#define MOD3GAL_DATA_DIR "data"
#endif

namespace {

using namespace mod3gal;

constexpr int kExitResolved = 0;
constexpr int kExitError = 1;
constexpr int kExitAmbiguous = 2;

std::string data_path(const std::string& name) { return std::string(MOD3GAL_DATA_DIR) + "/" + name; }

std::string default_atlas() {
  if (const char* env = std::getenv("MOD3GAL_ATLAS"); env && *env) return env;
  return data_path("atlas.jsonl");
}

struct ComputeArgs {
  std::string f, h, atlas = default_atlas(), torsion_data, generators, format = "text", output;
  Config cfg;
  bool verbose = false;
};

int run_compute(const ComputeArgs& a) {
  Genus2Curve curve;
  try {
    curve = curve_validate(parse_coefficients(a.f), a.h.empty() ? ZPoly{} : parse_coefficients(a.h));
    a.cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitError;
  }
  const GroupTable& g = GroupTable::instance();
  const SubgroupAtlas atlas = read_atlas(g, a.atlas);
  std::optional<ArithmeticTorsionData> data;
  if (!a.torsion_data.empty()) data = load_torsion_data(a.torsion_data);
  std::optional<std::vector<Mat4>> gens;
  if (!a.generators.empty()) gens = load_generators(a.generators);

  const PosteriorReport rep = end_to_end(curve, a.cfg, atlas, data, gens, g);
  const std::string out =
      a.format == "structured" ? report_to_json(rep, atlas, a.verbose).dump(2) + "\n" : report_to_text(rep, atlas, a.verbose);
  if (a.output.empty()) {
    std::cout << out;
  } else {
    std::ofstream os(a.output);
    if (!os) throw std::runtime_error("cannot write " + a.output);
    os << out;
  }
  return rep.outcome == Outcome::Resolved ? kExitResolved : kExitAmbiguous;
}

std::vector<LabelAnchor> all_anchors(const GroupTable& g, const std::string& path) {
  auto anchors = structural_anchors(g);
  for (auto& a : load_anchors(path)) anchors.push_back(std::move(a));
  return anchors;
}

int run_atlas_build(const std::string& path, const std::string& anchors) {
  const GroupTable& g = GroupTable::instance();
  const SubgroupAtlas atlas = build_atlas(g, load_anchors(anchors));
  write_atlas(atlas, path);
  std::cout << "wrote " << atlas.entries.size() << " classes, " << atlas.cells.size() << " Gassmann cells to " << path
            << '\n';
  return kExitResolved;
}

int run_atlas_verify(const std::string& path, const std::string& anchors) {
  const GroupTable& g = GroupTable::instance();
  const SubgroupAtlas atlas = read_atlas(g, path);
  const VerifyResult r = verify_atlas(g, atlas, all_anchors(g, anchors));
  for (const auto& [name, pass] : r.checks) std::cout << (pass ? "PASS " : "FAIL ") << name << '\n';
  for (const auto& d : r.diagnostics) std::cout << "  " << d << '\n';
  std::cout << "delta " << r.delta << '\n';
  return r.ok() ? kExitResolved : kExitError;
}

int run_tables(const std::string& atlas_path, const std::string& expected) {
  const GroupTable& g = GroupTable::instance();
  const SubgroupAtlas atlas = read_atlas(g, atlas_path);
  const auto tables = load_expected_tables(expected);
  bool ok = true;
  auto show = [&](const std::string& title, const TableCheck& t) {
    std::cout << title << '\n';
    for (const auto& l : t.lines) std::cout << "  " << l << '\n';
    for (const auto& f : t.failures) std::cout << "  MISMATCH " << f << '\n';
    ok = ok && t.ok();
  };
  show("Table 1: Gassmann equivalent, GL- but not GSp-conjugate", check_table1(g, atlas, tables));
  show("Table 2: fixed-space statistics", check_stats_table(g, atlas, tables, "table2"));
  show("Table 3: fixed-space statistics", check_stats_table(g, atlas, tables, "table3"));
  std::cout << (ok ? "tables match\n" : "tables differ\n");
  return ok ? kExitResolved : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mod-3 Galois images of genus-2 Jacobians"};
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Infer the mod-3 image of a curve y^2 + h y = f");
  compute->set_help_flag("--help", "Print this help message and exit");
  compute->add_option("--f", ca.f, "Coefficients of f, low to high degree, comma separated")->required();
  compute->add_option("--h", ca.h, "Coefficients of h, low to high degree");
  compute->add_option("--epsilon", ca.cfg.epsilon, "Posterior pruning threshold")->capture_default_str();
  compute->add_option("--b1", ca.cfg.b1, "Prime bound for signatures")->capture_default_str();
  compute->add_option("--b2", ca.cfg.b2, "Prime bound for conjugacy classes")->capture_default_str();
  compute->add_option("--seed", ca.cfg.seed, "Random seed")->capture_default_str();
  compute->add_option("--threads", ca.cfg.threads, "Worker threads (0: all cores)");
  compute->add_option("--atlas", ca.atlas, "Atlas file (default $MOD3GAL_ATLAS)")->capture_default_str();
  compute->add_option("--torsion-data", ca.torsion_data, "Arithmetic torsion data (JSON)");
  compute->add_option("--generators", ca.generators, "Explicit image generators (JSON)");
  compute->add_option("--format", ca.format, "Output format")->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  compute->add_option("--output", ca.output, "Write the report here instead of stdout");
  compute->add_flag("--verbose", ca.verbose, "Include the full posterior table");

  std::string atlas_path, anchors = data_path("label_anchors.json");
  auto* atlas_cmd = app.add_subcommand("atlas", "Build or verify the subgroup atlas");
  atlas_cmd->require_subcommand(1);
  auto* build = atlas_cmd->add_subcommand("build", "Enumerate subgroup classes and write the atlas");
  auto* verify = atlas_cmd->add_subcommand("verify", "Re-check a stored atlas");
  for (auto* sub : {build, verify}) {
    sub->add_option("--path", atlas_path, "Atlas file")->required();
    sub->add_option("--anchors", anchors, "Label anchors (JSON)")->capture_default_str();
  }

  std::string tables_atlas = default_atlas(), expected = data_path("expected_tables.json");
  auto* tables = app.add_subcommand("tables", "Recompute the Gassmann-cell tables and diff them");
  tables->add_option("--atlas", tables_atlas, "Atlas file")->capture_default_str();
  tables->add_option("--expected", expected, "Expected tables (JSON)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*compute) return run_compute(ca);
    if (*build) return run_atlas_build(atlas_path, anchors);
    if (*verify) return run_atlas_verify(atlas_path, anchors);
    if (*tables) return run_tables(tables_atlas, expected);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
