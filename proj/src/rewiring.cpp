#include "propgraph/rewiring.hpp"

#include "propgraph/curvature.hpp"
#include "propgraph/spectral.hpp"

namespace propgraph {

RewireObjective objective_from_string(const std::string& s) {
  if (s == "spectral_gap") return RewireObjective::SpectralGap;
  if (s == "curvature") return RewireObjective::Curvature;
  if (s == "resistance") return RewireObjective::Resistance;
  throw Error(ErrorCode::InvalidInput, "unknown rewire objective: " + s);
}

std::string to_string(RewireObjective o) {
  switch (o) {
    case RewireObjective::SpectralGap: return "spectral_gap";
    case RewireObjective::Curvature: return "curvature";
    case RewireObjective::Resistance: return "resistance";
  }
  return "unknown";
}

double rewire_objective_value(const Graph& g, RewireObjective obj,
                              bool resistance_max_variant) {
  switch (obj) {
    case RewireObjective::SpectralGap:
      return laplacian_spectrum(g, LaplacianKind::Normalized).spectral_gap;
    case RewireObjective::Curvature:
      return forman_curvature_map(g).min_value;
    case RewireObjective::Resistance: {
      ResistanceMatrix r = effective_resistance_matrix(g);
      if (resistance_max_variant) return r.values.maxCoeff();
      return r.values.sum() / 2.0;  // sum over unordered pairs
    }
  }
  throw Error(ErrorCode::Internal, "unreachable objective");
}

namespace {

// Signed improvement; positive means better.
double improvement(RewireObjective obj, double before, double after) {
  if (obj == RewireObjective::Resistance) return before - after;
  return after - before;
}

}  // namespace

RewirePlan rewire_greedy(const Graph& g, RewireObjective obj, int budget,
                         bool allow_delete, bool resistance_max_variant) {
  require(!g.directed(), ErrorCode::Refused, "rewire_greedy: undirected graph required");
  require(g.connected(), ErrorCode::Refused, "rewire_greedy: connected graph required");
  require(budget >= 0, ErrorCode::InvalidInput, "rewire_greedy: budget >= 0");
  require(allow_delete == false || obj == RewireObjective::Resistance,
          ErrorCode::InvalidInput,
          "rewire_greedy: deletion is only supported for the resistance objective");
  RewirePlan plan;
  plan.objective = obj;
  plan.budget = budget;
  plan.resistance_max_variant = resistance_max_variant;
  if (budget == 0) return plan;  // degenerate budget: empty plan

  Graph current = g;
  const int n = g.node_count();
  for (int step = 0; step < budget; ++step) {
    std::vector<std::pair<bool, Edge>> candidates;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!current.has_edge(u, v)) candidates.push_back({true, {u, v}});
    if (allow_delete)
      for (auto e : current.edges())
        if (e.first != e.second) candidates.push_back({false, e});
    require(!candidates.empty(), ErrorCode::InvalidInput,
            "rewire_greedy: no candidate edits (complete graph)");

    double before = rewire_objective_value(current, obj, resistance_max_variant);
    double best_gain = 1e-12;  // strict improvement required
    bool found = false;
    std::pair<bool, Edge> best_edit;
    double best_after = 0.0;
    for (auto [add, e] : candidates) {
      Graph trial = add ? current.with_edge_added(e.first, e.second)
                        : current.with_edge_removed(e.first, e.second);
      if (!trial.connected()) continue;
      double after = rewire_objective_value(trial, obj, resistance_max_variant);
      double gain = improvement(obj, before, after);
      if (gain > best_gain) {  // first-seen wins ties: candidates are ordered
        best_gain = gain;
        best_edit = {add, e};
        best_after = after;
        found = true;
      }
    }
    if (!found) break;  // no candidate improves
    current = best_edit.first
                  ? current.with_edge_added(best_edit.second.first, best_edit.second.second)
                  : current.with_edge_removed(best_edit.second.first, best_edit.second.second);
    plan.steps.push_back({best_edit.first, best_edit.second, before, best_after});
  }
  return plan;
}

Graph apply_plan(const Graph& g, const RewirePlan& plan) {
  Graph current = g;
  for (const auto& s : plan.steps)
    current = s.add ? current.with_edge_added(s.edge.first, s.edge.second)
                    : current.with_edge_removed(s.edge.first, s.edge.second);
  return current;
}

ExpanderResult expander_overlay(int n, int d, std::uint64_t seed,
                                double gap_floor, int max_retries) {
  require(d >= 3, ErrorCode::InvalidInput, "expander_overlay: d >= 3");
  require((static_cast<long long>(n) * d) % 2 == 0, ErrorCode::InvalidInput,
          "expander_overlay: n*d must be even");
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Graph g = Graph::random_regular(n, d, seed + static_cast<std::uint64_t>(attempt));
    if (!g.connected()) continue;
    double gap = laplacian_spectrum(g, LaplacianKind::Normalized).spectral_gap;
    if (gap >= gap_floor) return {g, gap, attempt + 1};
  }
  throw Error(ErrorCode::Refused,
              "expander_overlay: retries exhausted without reaching gap floor");
}

LayerTopologySchedule schedule_fc_last(const Graph& g, int layers) {
  require(layers >= 1, ErrorCode::InvalidInput, "schedule_fc_last: layers >= 1");
  LayerTopologySchedule s;
  for (int l = 0; l < layers - 1; ++l) s.layers.push_back(g);
  s.layers.push_back(Graph::complete(g.node_count()));
  return s;
}

}  // namespace propgraph
