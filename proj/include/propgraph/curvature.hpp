#ifndef PROPGRAPH_CURVATURE_HPP
#define PROPGRAPH_CURVATURE_HPP

#include <map>
#include <utility>

#include "propgraph/graph.hpp"

namespace propgraph {

struct CurvatureMap {
  std::map<Edge, double> scores;
  Edge min_edge{-1, -1};
  double min_value = 0.0;
};

// Augmented Forman curvature F(u,v) = 4 - d_u - d_v + 3 t_uv, with t_uv the
// number of triangles containing the edge. Undirected simple graphs only.
CurvatureMap forman_curvature_map(const Graph& g);

}  // namespace propgraph

#endif
