#ifndef PROPGRAPH_REWIRING_HPP
#define PROPGRAPH_REWIRING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "propgraph/graph.hpp"

namespace propgraph {

enum class RewireObjective { SpectralGap, Curvature, Resistance };

RewireObjective objective_from_string(const std::string& s);
std::string to_string(RewireObjective o);

struct RewireStep {
  bool add = true;
  Edge edge{-1, -1};
  double objective_before = 0.0;
  double objective_after = 0.0;
};

struct RewirePlan {
  RewireObjective objective = RewireObjective::SpectralGap;
  int budget = 0;
  bool resistance_max_variant = false;  // max-pair instead of total resistance
  std::vector<RewireStep> steps;
};

// Objective value on a graph: normalized spectral gap (maximize), minimum
// edge curvature (maximize), or total/max effective resistance (minimize).
double rewire_objective_value(const Graph& g, RewireObjective obj,
                              bool resistance_max_variant = false);

// Greedy edge edits, one per step, each strictly improving the objective;
// ties broken by lexicographically smallest (u,v). Deletions are considered
// only for the resistance objective with allow_delete, and only when the
// graph stays connected.
RewirePlan rewire_greedy(const Graph& g, RewireObjective obj, int budget,
                         bool allow_delete = false,
                         bool resistance_max_variant = false);

Graph apply_plan(const Graph& g, const RewirePlan& plan);

struct ExpanderResult {
  Graph graph;
  double spectral_gap = 0.0;  // normalized Laplacian
  int attempts = 0;
};

// Seeded random d-regular overlay with a spectral certificate; regenerates
// until the normalized gap reaches gap_floor.
ExpanderResult expander_overlay(int n, int d, std::uint64_t seed,
                                double gap_floor = 0.2, int max_retries = 200);

// Layers 1..L-1 use g; layer L uses the complete graph on the same nodes.
struct LayerTopologySchedule {
  std::vector<Graph> layers;
};
LayerTopologySchedule schedule_fc_last(const Graph& g, int layers);

}  // namespace propgraph

#endif
