// propgraph command line tool. Talks to the shared library through the C
// API only; everything here is argument plumbing and file IO.
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "propgraph.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitRefused = 4;
constexpr int kExitInternal = 5;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format = "both";
  double tol = -1.0;  // unset
};

int exit_code(pg_status s) {
  switch (s) {
    case PG_OK: return kExitOk;
    case PG_USAGE_ERROR: return kExitUsage;
    case PG_INPUT_ERROR: return kExitInput;
    case PG_REFUSED: return kExitRefused;
    case PG_INTERNAL_ERROR: return kExitInternal;
  }
  return kExitInternal;
}

[[noreturn]] void fail(pg_status s) {
  std::cerr << "error: " << pg_last_error() << "\n";
  std::exit(exit_code(s));
}

// Output files are written to a temp name and renamed into place so readers
// never observe a partial file.
void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << tmp << "\n";
      std::exit(kExitInternal);
    }
    out << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    std::exit(kExitInput);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Graph files may hold either the edge-list text or the JSON schema.
json graph_field(const std::string& path) {
  std::string text = read_file(path);
  size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == '{') return json::parse(text);
  return json(text);
}

// Writes the bundle JSON and its CSVs according to --format, then exits with
// 0 or, when any section was refused, 4.
[[noreturn]] void emit_bundle(const GlobalOpts& g, const std::string& name,
                              char* bundle_text) {
  json bundle = json::parse(bundle_text);
  pg_string_free(bundle_text);
  fs::path dir = g.out_dir;
  if (g.format == "json" || g.format == "both")
    write_atomic(dir / (name + ".json"), bundle.dump(2) + "\n");
  if (g.format == "csv" || g.format == "both")
    for (auto& [file, content] : bundle["csv"].items())
      write_atomic(dir / file, content.get<std::string>());

  bool refused = false;
  if (bundle.contains("outputs"))
    for (auto& [key, section] : bundle["outputs"].items())
      if (section.is_object() && section.contains("error")) refused = true;
  if (refused) {
    std::cerr << "warning: one or more sections refused; see bundle\n";
    std::exit(kExitRefused);
  }
  std::cout << "wrote " << (dir / (name + ".json")).string() << "\n";
  std::exit(kExitOk);
}

struct ModelOpts {
  std::string arch = "mean_gnn";
  int layers = 1;
  int dim = 4;
  bool causal = false;
  bool residual = false;
  bool layernorm = false;
  bool linear = false;
  bool unit_weights = false;
  bool exclude_self = false;
  bool uniform = false;
  bool pure_attention = false;
  bool differential = false;
  double lambda = 0.0;
  double gin_epsilon = 0.0;
  int pause_count = 0;
  std::string pause_placement = "append";
  bool sink_token = false;
};

void add_model_options(CLI::App* cmd, ModelOpts& m) {
  cmd->add_option("--arch", m.arch, "mean_gnn|gat|gin|transformer");
  cmd->add_option("--layers", m.layers, "layer count");
  cmd->add_option("--dim", m.dim, "feature width");
  cmd->add_flag("--causal", m.causal, "causal mask (transformer)");
  cmd->add_flag("--residual", m.residual, "residual connections");
  cmd->add_flag("--layernorm", m.layernorm, "layer normalization");
  cmd->add_flag("--linear", m.linear, "identity activations");
  cmd->add_flag("--unit-weights", m.unit_weights, "mean_gnn pure averaging");
  cmd->add_flag("--exclude-self", m.exclude_self,
                "mean_gnn aggregates neighbours only");
  cmd->add_flag("--uniform", m.uniform, "forced-uniform attention");
  cmd->add_flag("--pure-attention", m.pure_attention,
                "attention mixing only, no value/output projections");
  cmd->add_flag("--differential", m.differential, "differential attention");
  cmd->add_option("--lambda", m.lambda, "differential attention lambda");
  cmd->add_option("--gin-epsilon", m.gin_epsilon, "GIN epsilon");
  cmd->add_option("--pause-count", m.pause_count, "inserted pause tokens");
  cmd->add_option("--pause-placement", m.pause_placement, "prepend|append");
  cmd->add_flag("--sink-token", m.sink_token, "prepend a dedicated sink token");
}

json model_to_json(const ModelOpts& m, std::uint64_t seed) {
  return {{"arch", m.arch},
          {"layers", m.layers},
          {"dim", m.dim},
          {"seed", seed},
          {"causal", m.causal},
          {"residual", m.residual},
          {"layernorm", m.layernorm},
          {"linear_mode", m.linear},
          {"unit_weights", m.unit_weights},
          {"include_self", !m.exclude_self},
          {"uniform_attention", m.uniform},
          {"pure_attention", m.pure_attention},
          {"differential", m.differential},
          {"differential_lambda", m.lambda},
          {"gin_epsilon", m.gin_epsilon},
          {"pause_count", m.pause_count},
          {"pause_placement", m.pause_placement},
          {"sink_token", m.sink_token}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph propagation analysis toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  const char* env_dir = std::getenv("PROPGRAPH_OUT_DIR");
  g.out_dir = env_dir != nullptr && env_dir[0] != '\0' ? env_dir : ".";
  app.add_option("--seed", g.seed, "seed for all randomized operations");
  app.add_option("--out-dir", g.out_dir,
                 "output directory (default $PROPGRAPH_OUT_DIR or .)");
  app.add_option("--format", g.format, "json|csv|both")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  app.add_option("--tol", g.tol, "tolerance override for exactness checks");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a canonical graph");
  std::string family;
  int gn = 0, gm = 0, grows = 0, gcols = 0, gd = 0;
  std::string gen_out = "graph.edgelist";
  gen->add_option("--family", family,
                  "path|cycle|complete|barbell|grid|causal|random_regular")
      ->required();
  gen->add_option("--n", gn, "node count");
  gen->add_option("--m", gm, "clique size (barbell)");
  gen->add_option("--rows", grows, "grid rows");
  gen->add_option("--cols", gcols, "grid cols");
  gen->add_option("--d", gd, "degree (random_regular)");
  gen->add_option("--out", gen_out, "edge-list output filename");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "spectral/curvature/resistance report");
  std::string an_graph;
  bool an_spectral = false, an_curvature = false, an_resistance = false,
       an_cheeger = false;
  std::string an_laplacian = "normalized";
  analyze->add_option("graph", an_graph, "graph file")->required();
  analyze->add_flag("--spectral", an_spectral, "Laplacian spectrum and gap");
  analyze->add_flag("--curvature", an_curvature, "edge curvature map");
  analyze->add_flag("--resistance", an_resistance, "effective resistance matrix");
  analyze->add_flag("--cheeger-exact", an_cheeger,
                    "exact Cheeger constant (n <= 20)");
  analyze->add_option("--laplacian", an_laplacian, "normalized|combinatorial");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "sensitivity bounds vs empirical Jacobians");
  std::string bo_graph;
  ModelOpts bo_model;
  int bo_depth = 0, bo_span_from = 0, bo_span_len = 0;
  double bo_alpha_scale = 0.0;
  bounds->add_option("graph", bo_graph, "graph file")->required();
  add_model_options(bounds, bo_model);
  bounds->add_option("--depth", bo_depth, "depth r (default: model layers)");
  bounds->add_option("--span-from", bo_span_from, "span start layer");
  bounds->add_option("--span-len", bo_span_len, "span length");
  bounds->add_option("--alpha-scale", bo_alpha_scale,
                     "falsify alpha by this factor (negative control)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run diagnostics on a model");
  std::string si_graph;
  int si_n = 0;
  std::vector<std::string> si_diags;
  std::vector<int> si_lengths;
  double si_sink_threshold = 3.0;
  bool si_compare_residual = false;
  ModelOpts si_model;
  simulate->add_option("--graph", si_graph, "graph file (default: causal/complete n)");
  simulate->add_option("--n", si_n, "sequence length / node count");
  simulate
      ->add_option("--diag", si_diags,
                   "oversmoothing|sink|contraction|runway|underreaching|"
                   "last_token_collapse")
      ->required();
  simulate->add_option("--lengths", si_lengths, "length sweep for collapse");
  simulate->add_option("--sink-threshold", si_sink_threshold,
                       "sink flag multiple of the uniform baseline");
  simulate->add_flag("--compare-residual", si_compare_residual,
                     "add a residual-enabled collapse series");
  add_model_options(simulate, si_model);

  // rewire
  auto* rewire = app.add_subcommand("rewire", "greedy objective-improving edge edits");
  std::string rw_graph, rw_objective = "spectral_gap", rw_replay;
  int rw_budget = 1;
  bool rw_allow_delete = false, rw_resistance_max = false;
  rewire->add_option("graph", rw_graph, "graph file")->required();
  rewire->add_option("--objective", rw_objective,
                     "spectral_gap|curvature|resistance");
  rewire->add_option("--budget", rw_budget, "number of edits");
  rewire->add_flag("--allow-delete", rw_allow_delete,
                   "consider deletions (resistance objective only)");
  rewire->add_flag("--resistance-max", rw_resistance_max,
                   "minimize max-pair instead of total resistance");
  rewire->add_option("--replay", rw_replay, "apply a previously saved plan JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");

  // report
  auto* report = app.add_subcommand("report", "regenerate a bundle from its manifest");
  std::string rp_manifest;
  report->add_option("manifest", rp_manifest, "bundle or manifest JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (gen->parsed()) {
    json req{{"family", family}, {"seed", g.seed}};
    if (gn > 0) req["n"] = gn;
    if (gm > 0) req["m"] = gm;
    if (grows > 0) req["rows"] = grows;
    if (gcols > 0) req["cols"] = gcols;
    if (gd > 0) req["d"] = gd;
    char* out = nullptr;
    pg_status s = pg_gen(req.dump().c_str(), &out);
    if (s != PG_OK) fail(s);
    json bundle = json::parse(out);
    pg_string_free(out);
    fs::path dir = g.out_dir;
    write_atomic(dir / gen_out,
                 bundle["outputs"]["graph"]["edgelist"].get<std::string>());
    if (g.format == "json" || g.format == "both")
      write_atomic(dir / "gen.json", bundle.dump(2) + "\n");
    std::cout << "wrote " << (dir / gen_out).string() << "\n";
    return kExitOk;
  }

  if (analyze->parsed()) {
    json req{{"graph", graph_field(an_graph)},
             {"spectral", an_spectral},
             {"cheeger_exact", an_cheeger},
             {"curvature", an_curvature},
             {"resistance", an_resistance},
             {"laplacian", an_laplacian}};
    if (!an_spectral && !an_cheeger && !an_curvature && !an_resistance)
      req["spectral"] = req["cheeger_exact"] = req["curvature"] =
          req["resistance"] = true;
    char* out = nullptr;
    pg_status s = pg_analyze(req.dump().c_str(), &out);
    if (s != PG_OK) fail(s);
    emit_bundle(g, "analyze", out);
  }

  if (bounds->parsed()) {
    json req{{"graph", graph_field(bo_graph)},
             {"model", model_to_json(bo_model, g.seed)}};
    if (bo_depth > 0) req["depth"] = bo_depth;
    if (bo_span_len > 0) {
      req["span_from"] = bo_span_from;
      req["span_len"] = bo_span_len;
    }
    if (bo_alpha_scale > 0.0)
      req["spec_override"] = {{"alpha_scale", bo_alpha_scale}};
    char* out = nullptr;
    pg_status s = pg_bounds(req.dump().c_str(), &out);
    if (s != PG_OK) fail(s);
    emit_bundle(g, "bounds", out);
  }

  if (simulate->parsed()) {
    json req{{"model", model_to_json(si_model, g.seed)},
             {"diags", si_diags},
             {"sink_threshold", si_sink_threshold},
             {"compare_residual", si_compare_residual}};
    if (!si_graph.empty()) req["graph"] = graph_field(si_graph);
    if (si_n > 0) req["n"] = si_n;
    if (!si_lengths.empty()) req["lengths"] = si_lengths;
    if (g.tol >= 0.0) req["underreaching_tol"] = g.tol;
    char* out = nullptr;
    pg_status s = pg_simulate(req.dump().c_str(), &out);
    if (s != PG_OK) fail(s);
    emit_bundle(g, "simulate", out);
  }

  if (rewire->parsed()) {
    json req{{"graph", graph_field(rw_graph)}};
    if (!rw_replay.empty()) {
      req["replay"] = json::parse(read_file(rw_replay));
    } else {
      req["objective"] = rw_objective;
      req["budget"] = rw_budget;
      req["allow_delete"] = rw_allow_delete;
      req["resistance_max"] = rw_resistance_max;
    }
    char* out = nullptr;
    pg_status s = pg_rewire(req.dump().c_str(), &out);
    if (s != PG_OK) fail(s);
    json bundle = json::parse(out);
    pg_string_free(out);
    fs::path dir = g.out_dir;
    if (g.format == "json" || g.format == "both")
      write_atomic(dir / "rewire.json", bundle.dump(2) + "\n");
    write_atomic(dir / "plan.json",
                 bundle["outputs"]["plan"].dump(2) + "\n");
    write_atomic(dir / "rewired.edgelist",
                 bundle["outputs"]["rewired"]["edgelist"].get<std::string>());
    std::cout << "wrote " << (dir / "plan.json").string() << " and "
              << (dir / "rewired.edgelist").string() << "\n";
    return kExitOk;
  }

  if (verify->parsed()) {
    char* out = nullptr;
    pg_status s = pg_verify(g.seed, &out);
    if (s != PG_OK) fail(s);
    json bundle = json::parse(out);
    fs::path dir = g.out_dir;
    if (g.format == "json" || g.format == "both")
      write_atomic(dir / "verify.json", bundle.dump(2) + "\n");
    pg_string_free(out);
    bool all = bundle["outputs"]["all_pass"].get<bool>();
    for (const auto& c : bundle["outputs"]["criteria"]) {
      std::cout << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "  criterion "
                << c["id"].get<int>() << "  " << c["name"].get<std::string>()
                << "\n";
    }
    std::cout << (all ? "all criteria passed" : "criteria failed") << "\n";
    return all ? kExitOk : kExitRefused;
  }

  if (report->parsed()) {
    std::string manifest = read_file(rp_manifest);
    char* out = nullptr;
    pg_status s = pg_report_rerun(manifest.c_str(), &out);
    if (s != PG_OK) fail(s);
    json bundle = json::parse(out);
    std::string command = bundle["manifest"]["command"].get<std::string>();
    emit_bundle(g, command + ".regenerated", out);
  }

  return kExitUsage;
}
