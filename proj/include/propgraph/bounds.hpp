#ifndef PROPGRAPH_BOUNDS_HPP
#define PROPGRAPH_BOUNDS_HPP

#include <string>

#include <Eigen/Dense>

#include "propgraph/graph.hpp"

namespace propgraph {

// Lipschitz constants used by the sensitivity bounds.
struct BoundSpec {
  double alpha = 1.0;    // gradient bound of the update function
  double beta = 1.0;     // gradient bound of the aggregation function
  double c_sigma = 1.0;  // activation derivative bound
  double c_alpha = 1.0;  // update gradient bound (width bound)
  double c_beta = 1.0;   // aggregation gradient bound (width bound)
  double w = 1.0;        // max weight magnitude
  int d = 1;             // model width

  void validate() const;
};

enum class SensitivityKind {
  BoundTopping,
  BoundBlack,
  BoundLayerwise,
  BoundWidth,
  Empirical,
};

std::string to_string(SensitivityKind k);

// Pairwise node-to-node sensitivity magnitudes. Entry (i,s) refers to the
// sensitivity of node i to node s. For BoundTopping, in_regime(i,s) marks
// pairs at distance exactly r+1, the regime where the bound is stated.
struct SensitivityMatrix {
  Eigen::MatrixXd values;
  SensitivityKind kind = SensitivityKind::Empirical;
  int from_layer = 0;
  int to_layer = 0;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> regime;

  bool in_regime(int i, int s) const {
    return regime.size() == 0 || regime(i, s);
  }
};

// (alpha*beta)^(r+1) * (A^(r+1))_{is}; stated for dist(i,s) = r+1.
SensitivityMatrix topping_bound(const Graph& g, const BoundSpec& spec, int r_plus_1);

// (2*alpha*beta)^r * sum_{l=0..r} (A^l)_{uv}; any pair.
SensitivityMatrix black_bound(const Graph& g, const BoundSpec& spec, int r);

// (2*alpha*beta)^L * sum_{l=r..r+L} (A^l)_{uv}; layer span r -> r+L.
SensitivityMatrix layerwise_bound(const Graph& g, const BoundSpec& spec, int r, int L);

// (c_sigma*w*d)^(r+1) * (c_alpha*I + c_beta*A), as printed.
SensitivityMatrix width_bound(const Graph& g, const BoundSpec& spec, int r_plus_1);

}  // namespace propgraph

#endif
