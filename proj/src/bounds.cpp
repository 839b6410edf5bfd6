#include "propgraph/bounds.hpp"

#include <cmath>

namespace propgraph {

void BoundSpec::validate() const {
  require(alpha >= 0 && beta >= 0 && c_sigma >= 0 && c_alpha >= 0 &&
              c_beta >= 0 && w >= 0 && d >= 1,
          ErrorCode::InvalidInput, "BoundSpec: all constants must be nonnegative");
}

std::string to_string(SensitivityKind k) {
  switch (k) {
    case SensitivityKind::BoundTopping: return "bound_topping";
    case SensitivityKind::BoundBlack: return "bound_black";
    case SensitivityKind::BoundLayerwise: return "bound_layerwise";
    case SensitivityKind::BoundWidth: return "bound_width";
    case SensitivityKind::Empirical: return "empirical";
  }
  return "unknown";
}

namespace {

// Walk counts as a double matrix, entry (i,s) = walks s -> i.
Eigen::MatrixXd walk_matrix(const Graph& g, int m) {
  AdjacencyPower p = adjacency_power(g, m);
  Eigen::MatrixXd w(p.n, p.n);
  for (int i = 0; i < p.n; ++i)
    for (int s = 0; s < p.n; ++s) w(i, s) = static_cast<double>(p.at(i, s));
  return w;
}

}  // namespace

SensitivityMatrix topping_bound(const Graph& g, const BoundSpec& spec, int r_plus_1) {
  spec.validate();
  require(r_plus_1 >= 1, ErrorCode::InvalidInput, "topping_bound: r+1 >= 1");
  const int n = g.node_count();
  SensitivityMatrix s;
  s.kind = SensitivityKind::BoundTopping;
  s.from_layer = 0;
  s.to_layer = r_plus_1;
  s.values = std::pow(spec.alpha * spec.beta, r_plus_1) * walk_matrix(g, r_plus_1);
  s.regime.resize(n, n);
  for (int i = 0; i < n; ++i) {
    auto dist = g.bfs_distances(i, /*reverse=*/true);  // dist from s into i
    for (int v = 0; v < n; ++v) s.regime(i, v) = dist[v] == r_plus_1;
  }
  return s;
}

SensitivityMatrix black_bound(const Graph& g, const BoundSpec& spec, int r) {
  spec.validate();
  require(r >= 0, ErrorCode::InvalidInput, "black_bound: r >= 0");
  SensitivityMatrix s;
  s.kind = SensitivityKind::BoundBlack;
  s.from_layer = 0;
  s.to_layer = r;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
  for (int l = 0; l <= r; ++l) sum += walk_matrix(g, l);
  s.values = std::pow(2.0 * spec.alpha * spec.beta, r) * sum;
  return s;
}

SensitivityMatrix layerwise_bound(const Graph& g, const BoundSpec& spec, int r, int L) {
  spec.validate();
  require(L > 0, ErrorCode::InvalidInput, "layerwise_bound: L > 0");
  require(r >= 0, ErrorCode::InvalidInput, "layerwise_bound: r >= 0");
  SensitivityMatrix s;
  s.kind = SensitivityKind::BoundLayerwise;
  s.from_layer = r;
  s.to_layer = r + L;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
  for (int l = r; l <= r + L; ++l) sum += walk_matrix(g, l);
  s.values = std::pow(2.0 * spec.alpha * spec.beta, L) * sum;
  return s;
}

SensitivityMatrix width_bound(const Graph& g, const BoundSpec& spec, int r_plus_1) {
  spec.validate();
  require(r_plus_1 >= 1, ErrorCode::InvalidInput, "width_bound: r+1 >= 1");
  const int n = g.node_count();
  SensitivityMatrix s;
  s.kind = SensitivityKind::BoundWidth;
  s.from_layer = 0;
  s.to_layer = r_plus_1;
  double scalar = std::pow(spec.c_sigma * spec.w * spec.d, r_plus_1);
  s.values = scalar * (spec.c_alpha * Eigen::MatrixXd::Identity(n, n) +
                       spec.c_beta * walk_matrix(g, 1));
  return s;
}

}  // namespace propgraph
