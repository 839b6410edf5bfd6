#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "propgraph/report.hpp"

using namespace propgraph;
using nlohmann::json;

namespace {

json strip_timestamp(json bundle) {
  bundle["manifest"].erase("timestamp");
  return bundle;
}

}  // namespace

TEST_CASE("gen bundle produces the documented families") {
  json bundle = run_gen({{"family", "barbell"}, {"m", 4}});
  CHECK(bundle["outputs"]["graph"]["edges"] == 13);
  Graph g = Graph::from_edgelist(
      bundle["outputs"]["graph"]["edgelist"].get<std::string>());
  CHECK(g.edge_count() == 13);

  json causal = run_gen({{"family", "causal"}, {"n", 3}});
  CHECK(causal["outputs"]["graph"]["edges"] == 6);
  CHECK(causal["outputs"]["graph"]["directed"] == true);

  CHECK_THROWS_AS(run_gen({{"family", "pentagram"}, {"n", 3}}), Error);
}

TEST_CASE("analyze bundle on complete(4)") {
  json request{{"graph", Graph::complete(4).to_edgelist()},
               {"spectral", true},
               {"cheeger_exact", true},
               {"curvature", true},
               {"resistance", true}};
  json bundle = run_analyze(request);
  const json& out = bundle["outputs"];
  CHECK(out["spectral"]["spectral_gap"].get<double>() ==
        doctest::Approx(4.0 / 3.0));
  CHECK(out["cheeger"]["h"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(out["cheeger"]["inequality_verdict"] == "PASS");
  CHECK(bundle_status(bundle) == "ok");
  auto csvs = bundle_csvs(bundle);
  CHECK(csvs.count("curvature.csv") == 1);
  CHECK(csvs.count("resistance.csv") == 1);
  for (const auto& [name, content] : csvs)
    CHECK(content.rfind("# op=", 0) == 0);  // provenance header line
}

TEST_CASE("analyze flags the barbell bottleneck") {
  json bundle = run_analyze({{"graph", Graph::barbell(4).to_edgelist()},
                             {"curvature", true},
                             {"resistance", true}});
  const json& out = bundle["outputs"];
  CHECK(out["curvature"]["min_edge"] == json::array({3, 4}));
  CHECK(out["curvature"]["min_value"].get<double>() == doctest::Approx(-4.0));
  // The most resistant pair spans the two cliques.
  int u = out["resistance"]["max_pair"][0].get<int>();
  int v = out["resistance"]["max_pair"][1].get<int>();
  CHECK(std::min(u, v) < 4);
  CHECK(std::max(u, v) >= 4);
}

TEST_CASE("disconnected graphs refuse spectral sections but keep the bundle") {
  Graph disc = Graph::build(4, {{0, 1}, {2, 3}}, false);
  json bundle = run_analyze({{"graph", disc.to_edgelist()},
                             {"spectral", true},
                             {"curvature", true}});
  CHECK(bundle["outputs"]["spectral"].contains("error"));
  CHECK(bundle["outputs"]["spectral"]["code"] == "refused");
  CHECK(bundle["outputs"]["curvature"].contains("edges"));
  CHECK(bundle_status(bundle) == "refused");
}

TEST_CASE("bounds bundle dominance verdicts") {
  json model{{"arch", "mean_gnn"}, {"layers", 2}, {"dim", 4}, {"seed", 5},
             {"linear_mode", true}};
  json request{{"graph", Graph::path(3).to_edgelist()}, {"model", model}};
  json bundle = run_bounds(request);
  CHECK(bundle["outputs"]["dominance"]["verdict"] == "PASS");
  CHECK(bundle["outputs"]["spec"]["label"] == "exact");

  // Understating alpha must be reported as a dominance failure.
  json falsified = request;
  falsified["model"]["unit_weights"] = true;
  falsified["model"]["include_self"] = false;
  falsified["model"]["layers"] = 1;
  falsified["spec_override"] = {{"alpha_scale", 0.5}};
  json neg = run_bounds(falsified);
  CHECK(neg["outputs"]["spec"]["falsified_override"] == true);
  CHECK(neg["outputs"]["dominance"]["topping"]["verdict"] == "FAIL");
}

TEST_CASE("simulate bundle diagnostics") {
  json model{{"arch", "transformer"}, {"layers", 1}, {"dim", 4}, {"seed", 3},
             {"causal", true}, {"uniform_attention", true}};
  json bundle = run_simulate({{"model", model},
                              {"n", 4},
                              {"diags", json::array({"sink"})}});
  CHECK(bundle["outputs"]["sink"]["mass"][0][0].get<double>() ==
        doctest::Approx(25.0 / 48.0));

  json gnn{{"arch", "mean_gnn"}, {"layers", 32}, {"dim", 4}, {"seed", 3},
           {"linear_mode", true}, {"unit_weights", true}};
  json smooth = run_simulate({{"model", gnn},
                              {"graph", Graph::cycle(6).to_edgelist()},
                              {"diags", json::array({"oversmoothing"})}});
  auto energy = smooth["outputs"]["oversmoothing"]["energy"]["values"];
  CHECK(energy.back().get<double>() < 1e-6 * energy[0].get<double>());
  CHECK(bundle_csvs(smooth).count("oversmoothing_energy.csv") == 1);

  CHECK_THROWS_AS(run_simulate({{"model", gnn},
                                {"n", 4},
                                {"diags", json::array({"bogus"})}}),
                  Error);
}

TEST_CASE("rewire bundle replay reproduces the rewired graph") {
  json request{{"graph", Graph::barbell(4).to_edgelist()},
               {"objective", "spectral_gap"},
               {"budget", 2}};
  json bundle = run_rewire(request);
  std::string rewired =
      bundle["outputs"]["rewired"]["edgelist"].get<std::string>();
  json replay_request{{"graph", Graph::barbell(4).to_edgelist()},
                      {"replay", bundle["outputs"]["plan"]}};
  json replay = run_rewire(replay_request);
  CHECK(replay["outputs"]["rewired"]["edgelist"].get<std::string>() == rewired);
}

TEST_CASE("bundles regenerate bit-identically from their manifests") {
  json request{{"graph", Graph::barbell(4).to_edgelist()},
               {"spectral", true},
               {"cheeger_exact", true},
               {"curvature", true},
               {"resistance", true}};
  json a = run_analyze(request);
  json b = run_command(a["manifest"]["command"].get<std::string>(),
                       a["manifest"]["request"]);
  CHECK(strip_timestamp(a).dump() == strip_timestamp(b).dump());

  json model{{"arch", "mean_gnn"}, {"layers", 2}, {"dim", 3}, {"seed", 9},
             {"linear_mode", true}};
  json c = run_bounds({{"graph", Graph::path(4).to_edgelist()}, {"model", model}});
  json d = run_command("bounds", c["manifest"]["request"]);
  CHECK(strip_timestamp(c).dump() == strip_timestamp(d).dump());
}

TEST_CASE("model config json round trip") {
  ModelConfig cfg;
  cfg.arch = Arch::Transformer;
  cfg.layers = 3;
  cfg.dim = 8;
  cfg.seed = 77;
  cfg.causal = true;
  cfg.residual = true;
  cfg.differential = true;
  cfg.differential_lambda = 0.25;
  cfg.pause_count = 2;
  cfg.pause_placement = PausePlacement::Prepend;
  cfg.sink_token = true;
  ModelConfig back = model_config_from_json(model_config_to_json(cfg));
  CHECK(back.arch == cfg.arch);
  CHECK(back.layers == cfg.layers);
  CHECK(back.dim == cfg.dim);
  CHECK(back.seed == cfg.seed);
  CHECK(back.causal == cfg.causal);
  CHECK(back.residual == cfg.residual);
  CHECK(back.differential == cfg.differential);
  CHECK(back.differential_lambda == cfg.differential_lambda);
  CHECK(back.pause_count == cfg.pause_count);
  CHECK(back.pause_placement == cfg.pause_placement);
  CHECK(back.sink_token == cfg.sink_token);
}

TEST_CASE("graph requests accept both formats") {
  Graph g = Graph::grid(2, 3);
  Graph from_text = graph_from_request({{"graph", g.to_edgelist()}});
  Graph from_json = graph_from_request(
      {{"graph", json::parse(g.to_json_string())}});
  CHECK(from_text.edges() == g.edges());
  CHECK(from_json.edges() == g.edges());
  CHECK_THROWS_AS(graph_from_request(json::object()), Error);
}
