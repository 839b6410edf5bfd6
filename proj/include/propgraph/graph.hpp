#ifndef PROPGRAPH_GRAPH_HPP
#define PROPGRAPH_GRAPH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "propgraph/error.hpp"

namespace propgraph {

using Edge = std::pair<int, int>;

// Immutable node/edge topology. Undirected edges are stored once as
// (min,max); directed edges are stored as (from,to). Self-loops are only
// permitted when the graph is constructed with allow_self_loops (the causal
// generator uses them).
class Graph {
public:
  static Graph build(int n, std::vector<Edge> edges, bool directed,
                     bool allow_self_loops = false);

  // Canonical generators.
  static Graph path(int n);
  static Graph cycle(int n);
  static Graph complete(int n);
  static Graph barbell(int m);          // two K_m cliques joined by one bridge
  static Graph grid(int rows, int cols);
  static Graph causal(int n);           // directed, lower-triangular, self-loops
  static Graph random_regular(int n, int d, std::uint64_t seed);

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  bool directed() const { return directed_; }
  bool has_self_loops() const { return self_loops_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // For undirected graphs adjacency queries are symmetric.
  bool has_edge(int u, int v) const;

  // Undirected neighborhood (excludes self even if a self-loop exists).
  const std::vector<int>& neighbors(int u) const;
  int degree(int u) const { return static_cast<int>(neighbors(u).size()); }

  // Directed views; for undirected graphs both equal neighbors().
  const std::vector<int>& in_neighbors(int v) const;
  const std::vector<int>& out_neighbors(int u) const;

  // Dense 0/1 adjacency; A(u,v) = 1 iff arc u->v (symmetric if undirected).
  Eigen::MatrixXd adjacency() const;

  // Copy with a self-loop on every node (used when a model aggregates self).
  Graph with_self_loops() const;
  Graph with_edge_added(int u, int v) const;
  Graph with_edge_removed(int u, int v) const;

  bool connected() const;  // on the undirected support

  // BFS distances from s; unreachable nodes get -1. reverse follows arcs
  // backwards (who can reach s).
  std::vector<int> bfs_distances(int s, bool reverse = false) const;
  // Distance on the undirected support.
  int distance(int u, int v) const;

  std::string to_edgelist() const;
  static Graph from_edgelist(const std::string& text);
  std::string to_json_string() const;
  static Graph from_json_string(const std::string& text);

private:
  Graph() = default;
  void build_neighbor_lists();

  int n_ = 0;
  bool directed_ = false;
  bool self_loops_ = false;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> nbrs_;  // undirected support, no self
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
};

// Exact integer walk counts: entry (i,s) = number of length-m walks s -> i.
struct AdjacencyPower {
  int power = 0;
  int n = 0;
  std::vector<std::uint64_t> counts;  // row-major, counts[i*n+s]

  std::uint64_t at(int i, int s) const { return counts[static_cast<size_t>(i) * n + s]; }
};

// Throws Error(Overflow) instead of wrapping.
AdjacencyPower adjacency_power(const Graph& g, int m);

// All nodes with a directed path of length <= hops INTO `node` (the <=hops
// ball for undirected graphs). Includes the node itself.
std::vector<int> receptive_field(const Graph& g, int node, int hops);

}  // namespace propgraph

#endif
