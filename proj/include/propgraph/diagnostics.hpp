#ifndef PROPGRAPH_DIAGNOSTICS_HPP
#define PROPGRAPH_DIAGNOSTICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "propgraph/graph.hpp"
#include "propgraph/models.hpp"

namespace propgraph {

struct TraceSeries {
  std::string metric;
  std::vector<double> x;       // layer index or sequence length
  std::vector<double> values;
};

// (1/N) sum_i sum_{j in N_i} ||H_i - H_j||^2 over the undirected support.
double dirichlet_energy(const Eigen::MatrixXd& h, const Graph& g);

// Max pairwise Euclidean distance between feature rows.
double feature_diameter(const Eigen::MatrixXd& h);

struct OversmoothingCurve {
  TraceSeries energy;    // delta_DE per layer
  TraceSeries diameter;  // feature diameter per layer
};
OversmoothingCurve oversmoothing_curve(const LayerTrace& trace, const Graph& g);

// 1 - n*min(entry), clipped to [0,1]: upper bound on the per-application
// feature-diameter contraction of a row-stochastic mixing matrix.
double contraction_factor(const Eigen::MatrixXd& attention_map);

struct SinkReport {
  // mass[layer][j] = mean attention received by position j over the rows
  // that can see it (all rows i >= j for causal maps).
  std::vector<std::vector<double>> mass;
  std::vector<std::vector<double>> value_norms;  // per layer, per position
  double sink_score = 0.0;       // mean mass on position 1 across layers
  double uniform_baseline = 0.0; // mean mass any position would get under
                                 // uniform attention over visible rows
  double threshold_multiple = 3.0;
  bool sink_flagged = false;
  int placeholder_position = -1;  // sink-token row, when present
};
SinkReport sink_report(const LayerTrace& trace, double threshold_multiple = 3.0);

struct RunwayPosition {
  int position = 0;    // 1-based
  int receptive = 0;   // receptive field size (= position)
  int downstream = 0;  // later positions that read this one (= n - position)
  // path_counts[l] = number of computation-graph paths out of this position
  // reaching layer l of the unrolled L-layer causal DAG.
  std::vector<std::uint64_t> path_counts;
};
std::vector<RunwayPosition> runway_profile(const Graph& causal_graph, int layers);

struct UnderreachingViolation {
  int u = 0, v = 0;
  double max_abs = 0.0;
};
// For all pairs with dist(v -> u) > layers, the input->output Jacobian block
// must vanish. Returns violating pairs (expected empty).
std::vector<UnderreachingViolation> underreaching_check(const Model& model,
                                                        const Graph& g,
                                                        int layers,
                                                        const Eigen::MatrixXd& x,
                                                        double tol);

// ||h_n(seq_a) - h_n(seq_b)|| for two sequences identical except the final
// token, swept over sequence lengths.
TraceSeries last_token_collapse(const ModelConfig& cfg,
                                const std::vector<int>& lengths,
                                std::uint64_t seed);

}  // namespace propgraph

#endif
