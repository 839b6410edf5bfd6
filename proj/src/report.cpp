#include "propgraph/report.hpp"

#include "propgraph/verify.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "propgraph/bounds.hpp"
#include "propgraph/curvature.hpp"
#include "propgraph/diagnostics.hpp"
#include "propgraph/rewiring.hpp"
#include "propgraph/spectral.hpp"

namespace propgraph {

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json series_to_json(const TraceSeries& s) {
  return json{{"metric", s.metric}, {"x", s.x}, {"values", s.values}};
}

json error_to_json(const Error& e) {
  return json{{"error", e.what()},
              {"code", e.code() == ErrorCode::Refused ? "refused" : "invalid"}};
}

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json make_bundle(const std::string& command, const json& request) {
  json b;
  b["manifest"] = {{"tool", "propgraph"},
                   {"version", PROPGRAPH_VERSION},
                   {"command", command},
                   {"request", request},
                   {"timestamp", timestamp_utc()}};
  b["outputs"] = json::object();
  b["csv"] = json::object();
  return b;
}

std::string make_csv(const std::string& op, const json& params,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os << "# op=" << op << " params=" << params.dump() << "\n";
  for (size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  os.precision(17);
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i)
      os << r[i] << (i + 1 < r.size() ? "," : "\n");
  }
  return os.str();
}

void add_series_csv(json& bundle, const std::string& name, const std::string& op,
                    const json& params, const std::string& xname,
                    const TraceSeries& s) {
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < s.x.size(); ++i) rows.push_back({s.x[i], s.values[i]});
  bundle["csv"][name + ".csv"] = make_csv(op, params, {xname, s.metric}, rows);
}

void add_matrix_csv(json& bundle, const std::string& name, const std::string& op,
                    const json& params, const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      rows.push_back({static_cast<double>(i), static_cast<double>(j), m(i, j)});
  bundle["csv"][name + ".csv"] = make_csv(op, params, {"i", "j", "value"}, rows);
}

}  // namespace

ModelConfig model_config_from_json(const json& j) {
  ModelConfig c;
  require(j.contains("arch"), ErrorCode::InvalidInput, "model config: arch required");
  c.arch = arch_from_string(j["arch"].get<std::string>());
  c.layers = j.value("layers", 1);
  c.dim = j.value("dim", 4);
  c.seed = j.value("seed", std::uint64_t{0});
  c.causal = j.value("causal", false);
  c.residual = j.value("residual", false);
  c.layernorm = j.value("layernorm", false);
  c.gin_epsilon = j.value("gin_epsilon", 0.0);
  c.differential = j.value("differential", false);
  c.differential_lambda = j.value("differential_lambda", 0.0);
  c.pause_count = j.value("pause_count", 0);
  std::string placement = j.value("pause_placement", "append");
  require(placement == "append" || placement == "prepend", ErrorCode::InvalidInput,
          "model config: pause_placement must be append|prepend");
  c.pause_placement = placement == "append" ? PausePlacement::Append
                                            : PausePlacement::Prepend;
  c.sink_token = j.value("sink_token", false);
  c.linear_mode = j.value("linear_mode", false);
  c.unit_weights = j.value("unit_weights", false);
  c.include_self = j.value("include_self", true);
  c.uniform_attention = j.value("uniform_attention", false);
  c.pure_attention = j.value("pure_attention", false);
  c.validate();
  return c;
}

json model_config_to_json(const ModelConfig& c) {
  return json{{"arch", to_string(c.arch)},
              {"layers", c.layers},
              {"dim", c.dim},
              {"seed", c.seed},
              {"causal", c.causal},
              {"residual", c.residual},
              {"layernorm", c.layernorm},
              {"gin_epsilon", c.gin_epsilon},
              {"differential", c.differential},
              {"differential_lambda", c.differential_lambda},
              {"pause_count", c.pause_count},
              {"pause_placement",
               c.pause_placement == PausePlacement::Append ? "append" : "prepend"},
              {"sink_token", c.sink_token},
              {"linear_mode", c.linear_mode},
              {"unit_weights", c.unit_weights},
              {"include_self", c.include_self},
              {"uniform_attention", c.uniform_attention},
              {"pure_attention", c.pure_attention}};
}

Graph graph_from_request(const json& request) {
  require(request.contains("graph"), ErrorCode::InvalidInput,
          "request: graph field required");
  const json& g = request["graph"];
  if (g.is_string()) return Graph::from_edgelist(g.get<std::string>());
  return Graph::from_json_string(g.dump());
}

json run_gen(const json& request) {
  json bundle = make_bundle("gen", request);
  std::string family = request.value("family", "");
  std::uint64_t seed = request.value("seed", std::uint64_t{0});
  Graph g = [&]() {
    if (family == "path") return Graph::path(request.at("n").get<int>());
    if (family == "cycle") return Graph::cycle(request.at("n").get<int>());
    if (family == "complete") return Graph::complete(request.at("n").get<int>());
    if (family == "barbell") return Graph::barbell(request.at("m").get<int>());
    if (family == "grid")
      return Graph::grid(request.at("rows").get<int>(), request.at("cols").get<int>());
    if (family == "causal") return Graph::causal(request.at("n").get<int>());
    if (family == "random_regular")
      return Graph::random_regular(request.at("n").get<int>(),
                                   request.at("d").get<int>(), seed);
    throw Error(ErrorCode::InvalidInput, "unknown family: " + family);
  }();
  bundle["outputs"]["graph"] = {{"edgelist", g.to_edgelist()},
                                {"json", json::parse(g.to_json_string())},
                                {"n", g.node_count()},
                                {"edges", g.edge_count()},
                                {"directed", g.directed()}};
  return bundle;
}

json run_analyze(const json& request) {
  json bundle = make_bundle("analyze", request);
  Graph g = graph_from_request(request);
  json& out = bundle["outputs"];
  out["graph"] = {{"n", g.node_count()}, {"edges", g.edge_count()},
                  {"directed", g.directed()}};

  if (request.value("spectral", false)) {
    std::string kind_s = request.value("laplacian", "normalized");
    LaplacianKind kind = kind_s == "combinatorial" ? LaplacianKind::Combinatorial
                                                   : LaplacianKind::Normalized;
    try {
      SpectralSummary s = laplacian_spectrum(g, kind);
      out["spectral"] = {{"op", "laplacian_spectrum"},
                         {"params", {{"kind", kind_s}}},
                         {"eigenvalues", s.eigenvalues},
                         {"spectral_gap", s.spectral_gap}};
    } catch (const Error& e) {
      out["spectral"] = error_to_json(e);
    }
  }
  if (request.value("cheeger_exact", false)) {
    try {
      double h = cheeger_constant_exact(g);
      double gap = laplacian_spectrum(g, LaplacianKind::Normalized).spectral_gap;
      bool pass = h * h / 2.0 - 1e-9 <= gap && gap <= 2.0 * h + 1e-9;
      out["cheeger"] = {{"op", "cheeger_constant_exact"},
                        {"h", h},
                        {"bounds", {h * h / 2.0, 2.0 * h}},
                        {"spectral_gap", gap},
                        {"inequality_verdict", pass ? "PASS" : "FAIL"}};
    } catch (const Error& e) {
      out["cheeger"] = error_to_json(e);
    }
  }
  if (request.value("curvature", false)) {
    try {
      CurvatureMap m = forman_curvature_map(g);
      json edges = json::array();
      std::vector<std::vector<double>> rows;
      for (const auto& [e, f] : m.scores) {
        edges.push_back({{"u", e.first}, {"v", e.second}, {"curvature", f}});
        rows.push_back({static_cast<double>(e.first),
                        static_cast<double>(e.second), f});
      }
      out["curvature"] = {{"op", "forman_curvature_map"},
                          {"edges", edges},
                          {"min_edge", {m.min_edge.first, m.min_edge.second}},
                          {"min_value", m.min_value}};
      bundle["csv"]["curvature.csv"] =
          make_csv("forman_curvature_map", json::object(),
                   {"u", "v", "curvature"}, rows);
    } catch (const Error& e) {
      out["curvature"] = error_to_json(e);
    }
  }
  if (request.value("resistance", false)) {
    try {
      ResistanceMatrix r = effective_resistance_matrix(g);
      int bu = 0, bv = 0;
      double best = -1.0;
      for (int u = 0; u < g.node_count(); ++u)
        for (int v = u + 1; v < g.node_count(); ++v)
          if (r.values(u, v) > best) {
            best = r.values(u, v);
            bu = u;
            bv = v;
          }
      out["resistance"] = {{"op", "effective_resistance_matrix"},
                           {"matrix", matrix_to_json(r.values)},
                           {"edge_count", r.edge_count},
                           {"max_pair", {bu, bv}},
                           {"max_value", best},
                           {"total", r.values.sum() / 2.0}};
      add_matrix_csv(bundle, "resistance", "effective_resistance_matrix",
                     json::object(), r.values);
    } catch (const Error& e) {
      out["resistance"] = error_to_json(e);
    }
  }
  return bundle;
}

json run_bounds(const json& request) {
  json bundle = make_bundle("bounds", request);
  Graph g = graph_from_request(request);
  ModelConfig cfg = model_config_from_json(request.at("model"));
  int depth = request.value("depth", cfg.layers);
  int span_from = request.value("span_from", 0);
  int span_len = request.value("span_len", depth - span_from);
  require(depth >= 1 && depth <= cfg.layers, ErrorCode::InvalidInput,
          "bounds: depth must be in 1..model layers");
  require(span_from >= 0 && span_len >= 1 && span_from + span_len <= cfg.layers,
          ErrorCode::InvalidInput, "bounds: invalid span");
  Model model(cfg);
  BoundSpec spec = model.lipschitz_constants();
  bool falsified = false;
  if (request.contains("spec_override")) {
    const json& o = request["spec_override"];
    if (o.contains("alpha")) { spec.alpha = o["alpha"].get<double>(); falsified = true; }
    if (o.contains("beta")) { spec.beta = o["beta"].get<double>(); falsified = true; }
    if (o.contains("alpha_scale")) {
      spec.alpha *= o["alpha_scale"].get<double>();
      falsified = true;
    }
  }
  // Bounds use the raw 0/1 adjacency with self-loops included iff the model
  // aggregation includes self.
  bool self_in_agg = cfg.arch == Arch::MeanGnn && cfg.include_self;
  Graph bg = self_in_agg ? g.with_self_loops() : g;

  SensitivityMatrix topping = topping_bound(bg, spec, depth);
  SensitivityMatrix black = black_bound(bg, spec, depth);
  SensitivityMatrix layerwise = layerwise_bound(bg, spec, span_from, span_len);
  SensitivityMatrix width = width_bound(bg, spec, depth);

  const int n = g.node_count();
  Eigen::MatrixXd x = seeded_features(n, cfg.dim, cfg.seed, "bounds_input");
  Eigen::MatrixXd emp_full(n, n), emp_span(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      emp_full(u, v) = model.empirical_jacobian(g, x, 0, depth, u, v).max_abs;
      emp_span(u, v) =
          model.empirical_jacobian(g, x, span_from, span_len, u, v).max_abs;
    }

  const double slack = 1e-8;
  auto verdict = [&](const SensitivityMatrix& b, const Eigen::MatrixXd& emp,
                     bool regime_only) {
    int checked = 0;
    json violations = json::array();
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        if (regime_only && !b.in_regime(u, v)) continue;
        ++checked;
        if (emp(u, v) > b.values(u, v) + slack)
          violations.push_back({{"u", u}, {"v", v}, {"empirical", emp(u, v)},
                                {"bound", b.values(u, v)}});
      }
    return json{{"checked_entries", checked},
                {"violations", violations},
                {"verdict", violations.empty() ? "PASS" : "FAIL"}};
  };

  json& out = bundle["outputs"];
  out["spec"] = {{"alpha", spec.alpha}, {"beta", spec.beta},
                 {"c_sigma", spec.c_sigma}, {"c_alpha", spec.c_alpha},
                 {"c_beta", spec.c_beta}, {"w", spec.w}, {"d", spec.d},
                 {"falsified_override", falsified},
                 {"exact", cfg.linear_mode},
                 {"label", cfg.linear_mode ? "exact" : "estimate"}};
  out["adjacency_convention"] =
      self_in_agg ? "self-loops included (aggregation includes self)"
                  : "raw adjacency, no self-loops";
  auto bound_json = [&](const SensitivityMatrix& b) {
    json j{{"kind", to_string(b.kind)},
           {"layer_span", {b.from_layer, b.to_layer}},
           {"values", matrix_to_json(b.values)}};
    if (b.kind == SensitivityKind::BoundTopping) {
      json regime = json::array();
      for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int s = 0; s < n; ++s) row.push_back(b.regime(i, s));
        regime.push_back(row);
      }
      j["regime"] = regime;
      j["regime_note"] = "bound stated for pairs at distance exactly r+1";
    }
    if (b.kind == SensitivityKind::BoundWidth)
      j["note"] = "as-printed matrix expression; no per-pair dominance claim";
    return j;
  };
  out["bounds"] = {{"topping", bound_json(topping)},
                   {"black", bound_json(black)},
                   {"layerwise", bound_json(layerwise)},
                   {"width", bound_json(width)}};
  out["empirical"] = {{"input_to_depth", matrix_to_json(emp_full)},
                      {"span", matrix_to_json(emp_span)},
                      {"layer_span", {span_from, span_from + span_len}}};
  out["dominance"] = {{"topping", verdict(topping, emp_full, true)},
                      {"black", verdict(black, emp_full, false)},
                      {"layerwise", verdict(layerwise, emp_span, false)}};
  bool all = true;
  for (const char* k : {"topping", "black", "layerwise"})
    all = all && out["dominance"][k]["verdict"] == "PASS";
  out["dominance"]["verdict"] = all ? "PASS" : "FAIL";

  json params{{"depth", depth}};
  add_matrix_csv(bundle, "bound_topping", "topping_bound", params, topping.values);
  add_matrix_csv(bundle, "bound_black", "black_bound", params, black.values);
  add_matrix_csv(bundle, "bound_layerwise", "layerwise_bound",
                 json{{"from", span_from}, {"span", span_len}}, layerwise.values);
  add_matrix_csv(bundle, "bound_width", "width_bound", params, width.values);
  add_matrix_csv(bundle, "empirical", "empirical_jacobian", params, emp_full);
  return bundle;
}

json run_simulate(const json& request) {
  json bundle = make_bundle("simulate", request);
  ModelConfig cfg = model_config_from_json(request.at("model"));
  Model model(cfg);
  json& out = bundle["outputs"];

  Graph g = [&]() {
    if (request.contains("graph")) return graph_from_request(request);
    int n = request.value("n", 8);
    if (cfg.arch == Arch::Transformer && cfg.causal) return Graph::causal(n);
    return Graph::complete(n);
  }();

  std::vector<std::string> diags;
  for (const auto& d : request.value("diags", json::array()))
    diags.push_back(d.get<std::string>());
  require(!diags.empty(), ErrorCode::InvalidInput, "simulate: no diagnostics requested");

  Eigen::MatrixXd x = seeded_features(g.node_count(), cfg.dim, cfg.seed, "simulate_input");

  for (const auto& d : diags) {
    if (d == "oversmoothing") {
      LayerTrace t = model.forward(g, x);
      OversmoothingCurve c = oversmoothing_curve(t, g);
      out["oversmoothing"] = {{"op", "oversmoothing_curve"},
                              {"energy", series_to_json(c.energy)},
                              {"diameter", series_to_json(c.diameter)},
                              {"note", cfg.causal
                                   ? "causal trace: energy on undirected support"
                                   : "undirected neighbor sum"}};
      add_series_csv(bundle, "oversmoothing_energy", "oversmoothing_curve",
                     json{{"layers", cfg.layers}}, "layer", c.energy);
      add_series_csv(bundle, "oversmoothing_diameter", "oversmoothing_curve",
                     json{{"layers", cfg.layers}}, "layer", c.diameter);
    } else if (d == "sink") {
      LayerTrace t = model.forward(g, x);
      double mult = request.value("sink_threshold", 3.0);
      SinkReport r = sink_report(t, mult);
      out["sink"] = {{"op", "sink_report"},
                     {"mass", r.mass},
                     {"value_norms", r.value_norms},
                     {"sink_score", r.sink_score},
                     {"uniform_baseline", r.uniform_baseline},
                     {"threshold_multiple", r.threshold_multiple},
                     {"sink_flagged", r.sink_flagged},
                     {"placeholder_position", r.placeholder_position}};
      std::vector<std::vector<double>> mass_rows;
      for (size_t l = 0; l < r.mass.size(); ++l)
        for (size_t p = 0; p < r.mass[l].size(); ++p)
          mass_rows.push_back({static_cast<double>(l),
                               static_cast<double>(p), r.mass[l][p]});
      bundle["csv"]["sink.csv"] =
          make_csv("sink_report", json{{"threshold_multiple", mult}},
                   {"layer", "position", "mass"}, mass_rows);
    } else if (d == "contraction") {
      LayerTrace t = model.forward(g, x);
      json layers = json::array();
      for (size_t l = 0; l < t.attention.size(); ++l) {
        const auto& a = t.attention[l];
        const auto& h = t.features[l];
        double before = feature_diameter(h);
        double after = feature_diameter(a * h);
        double measured = before > 0 ? after / before : 0.0;
        json e{{"layer", l}, {"measured_diameter_ratio", measured}};
        try {
          e["contraction_bound"] = contraction_factor(a);
        } catch (const Error& err) {
          e["contraction_bound_error"] = err.what();  // differential maps
        }
        layers.push_back(e);
      }
      out["contraction"] = {{"op", "contraction_factor"}, {"layers", layers}};
    } else if (d == "runway") {
      require(cfg.causal, ErrorCode::InvalidInput, "runway: causal config required");
      auto profile = runway_profile(Graph::causal(g.node_count()), cfg.layers);
      json rows = json::array();
      std::vector<std::vector<double>> csv_rows;
      for (const auto& p : profile) {
        rows.push_back({{"position", p.position},
                        {"receptive", p.receptive},
                        {"downstream", p.downstream},
                        {"path_counts", p.path_counts}});
        csv_rows.push_back({static_cast<double>(p.position),
                            static_cast<double>(p.receptive),
                            static_cast<double>(p.downstream),
                            static_cast<double>(p.path_counts.back())});
      }
      out["runway"] = {{"op", "runway_profile"}, {"positions", rows}};
      bundle["csv"]["runway.csv"] =
          make_csv("runway_profile", json{{"layers", cfg.layers}},
                   {"position", "receptive", "downstream", "paths_at_L"}, csv_rows);
    } else if (d == "underreaching") {
      double tol = request.value("underreaching_tol",
                                 cfg.linear_mode ? 1e-12 : 1e-9);
      auto v = underreaching_check(model, g, cfg.layers, x, tol);
      json rows = json::array();
      for (const auto& viol : v)
        rows.push_back({{"u", viol.u}, {"v", viol.v}, {"max_abs", viol.max_abs}});
      out["underreaching"] = {{"op", "underreaching_check"},
                              {"tol", tol},
                              {"violations", rows},
                              {"verdict", rows.empty() ? "PASS" : "FAIL"}};
    } else if (d == "last_token_collapse") {
      std::vector<int> lengths;
      for (const auto& l : request.value("lengths", json::array()))
        lengths.push_back(l.get<int>());
      if (lengths.empty()) lengths = {2, 4, 8, 16, 32, 64};
      TraceSeries s = last_token_collapse(cfg, lengths, cfg.seed);
      out["last_token_collapse"] = {{"op", "last_token_collapse"},
                                    {"series", series_to_json(s)}};
      add_series_csv(bundle, "last_token_collapse", "last_token_collapse",
                     json{{"layers", cfg.layers}}, "length", s);
      if (request.value("compare_residual", false)) {
        ModelConfig rc = cfg;
        rc.residual = true;
        TraceSeries rs = last_token_collapse(rc, lengths, cfg.seed);
        out["last_token_collapse"]["residual_series"] = series_to_json(rs);
      }
    } else {
      throw Error(ErrorCode::InvalidInput, "unknown diagnostic: " + d);
    }
  }
  return bundle;
}

json run_rewire(const json& request) {
  json bundle = make_bundle("rewire", request);
  Graph g = graph_from_request(request);
  json& out = bundle["outputs"];
  RewirePlan plan;
  if (request.contains("replay")) {
    const json& p = request["replay"];
    plan.objective = objective_from_string(p.at("objective").get<std::string>());
    plan.budget = p.value("budget", 0);
    plan.resistance_max_variant = p.value("resistance_max", false);
    for (const auto& s : p.at("steps")) {
      RewireStep st;
      st.add = s.at("op").get<std::string>() == "add";
      st.edge = {s.at("edge")[0].get<int>(), s.at("edge")[1].get<int>()};
      st.objective_before = s.value("before", 0.0);
      st.objective_after = s.value("after", 0.0);
      plan.steps.push_back(st);
    }
  } else {
    RewireObjective obj =
        objective_from_string(request.value("objective", "spectral_gap"));
    plan = rewire_greedy(g, obj, request.value("budget", 1),
                         request.value("allow_delete", false),
                         request.value("resistance_max", false));
  }
  Graph rewired = apply_plan(g, plan);
  json steps = json::array();
  for (const auto& s : plan.steps)
    steps.push_back({{"op", s.add ? "add" : "remove"},
                     {"edge", {s.edge.first, s.edge.second}},
                     {"before", s.objective_before},
                     {"after", s.objective_after}});
  out["plan"] = {{"objective", to_string(plan.objective)},
                 {"budget", plan.budget},
                 {"resistance_max", plan.resistance_max_variant},
                 {"steps", steps}};
  out["rewired"] = {{"edgelist", rewired.to_edgelist()},
                    {"n", rewired.node_count()},
                    {"edges", rewired.edge_count()}};
  return bundle;
}

json run_verify_bundle(const json& request) {
  json bundle = make_bundle("verify", request);
  bundle["outputs"] = run_verify(request.value("seed", std::uint64_t{0}));
  return bundle;
}

json run_command(const std::string& command, const json& request) {
  if (command == "gen") return run_gen(request);
  if (command == "analyze") return run_analyze(request);
  if (command == "bounds") return run_bounds(request);
  if (command == "simulate") return run_simulate(request);
  if (command == "rewire") return run_rewire(request);
  if (command == "verify") return run_verify_bundle(request);
  throw Error(ErrorCode::InvalidInput, "unknown command: " + command);
}

std::map<std::string, std::string> bundle_csvs(const json& bundle) {
  std::map<std::string, std::string> out;
  if (bundle.contains("csv"))
    for (const auto& [name, content] : bundle["csv"].items())
      out[name] = content.get<std::string>();
  return out;
}

std::string bundle_status(const json& bundle) {
  if (!bundle.contains("outputs")) return "ok";
  for (const auto& [key, section] : bundle["outputs"].items())
    if (section.is_object() && section.contains("error")) return "refused";
  return "ok";
}

}  // namespace propgraph
