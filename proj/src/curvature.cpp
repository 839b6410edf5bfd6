#include "propgraph/curvature.hpp"

#include <algorithm>
#include <limits>

namespace propgraph {

CurvatureMap forman_curvature_map(const Graph& g) {
  require(!g.directed(), ErrorCode::Refused,
          "forman_curvature_map requires an undirected graph");
  for (auto [u, v] : g.edges())
    require(u != v, ErrorCode::InvalidInput,
            "forman_curvature_map: self-loops not supported");
  CurvatureMap m;
  m.min_value = std::numeric_limits<double>::infinity();
  for (auto [u, v] : g.edges()) {
    const auto& nu = g.neighbors(u);
    const auto& nv = g.neighbors(v);
    std::vector<int> common;
    std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(),
                          std::back_inserter(common));
    double f = 4.0 - g.degree(u) - g.degree(v) + 3.0 * common.size();
    m.scores[{u, v}] = f;
    if (f < m.min_value) {
      m.min_value = f;
      m.min_edge = {u, v};
    }
  }
  return m;
}

}  // namespace propgraph
