#include "propgraph/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace propgraph {

Graph Graph::build(int n, std::vector<Edge> edges, bool directed,
                   bool allow_self_loops) {
  require(n >= 1, ErrorCode::InvalidInput, "node count must be >= 1");
  std::set<Edge> seen;
  for (auto& [u, v] : edges) {
    require(u >= 0 && u < n && v >= 0 && v < n, ErrorCode::InvalidInput,
            "edge index out of range: (" + std::to_string(u) + "," +
                std::to_string(v) + ") with n=" + std::to_string(n));
    if (u == v)
      require(allow_self_loops, ErrorCode::InvalidInput,
              "self-loop (" + std::to_string(u) + ") not allowed");
    if (!directed && u > v) std::swap(u, v);
    require(seen.insert({u, v}).second, ErrorCode::InvalidInput,
            "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  Graph g;
  g.n_ = n;
  g.directed_ = directed;
  g.self_loops_ = allow_self_loops;
  g.edges_.assign(seen.begin(), seen.end());
  g.build_neighbor_lists();
  return g;
}

void Graph::build_neighbor_lists() {
  nbrs_.assign(n_, {});
  in_.assign(n_, {});
  out_.assign(n_, {});
  for (auto [u, v] : edges_) {
    if (u != v) {
      nbrs_[u].push_back(v);
      nbrs_[v].push_back(u);
    }
    out_[u].push_back(v);
    in_[v].push_back(u);
    if (!directed_ && u != v) {
      out_[v].push_back(u);
      in_[u].push_back(v);
    }
  }
  for (auto* lists : {&nbrs_, &in_, &out_})
    for (auto& l : *lists) std::sort(l.begin(), l.end());
}

Graph Graph::path(int n) {
  require(n >= 1, ErrorCode::InvalidInput, "path: n >= 1");
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return build(n, e, false);
}

Graph Graph::cycle(int n) {
  require(n >= 3, ErrorCode::InvalidInput, "cycle: n >= 3");
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  e.push_back({0, n - 1});
  return build(n, e, false);
}

Graph Graph::complete(int n) {
  require(n >= 1, ErrorCode::InvalidInput, "complete: n >= 1");
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return build(n, e, false);
}

Graph Graph::barbell(int m) {
  require(m >= 3, ErrorCode::InvalidInput, "barbell: m >= 3");
  std::vector<Edge> e;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      e.push_back({i, j});
      e.push_back({m + i, m + j});
    }
  e.push_back({m - 1, m});  // bridge
  return build(2 * m, e, false);
}

Graph Graph::grid(int rows, int cols) {
  require(rows >= 1 && cols >= 1, ErrorCode::InvalidInput, "grid: dims >= 1");
  std::vector<Edge> e;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) e.push_back({id(r, c), id(r + 1, c)});
    }
  return build(rows * cols, e, false);
}

Graph Graph::causal(int n) {
  require(n >= 1, ErrorCode::InvalidInput, "causal: n >= 1");
  std::vector<Edge> e;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) e.push_back({j, i});  // arc j -> i for j <= i
  return build(n, e, true, true);
}

Graph Graph::random_regular(int n, int d, std::uint64_t seed) {
  require(d >= 1 && d < n, ErrorCode::InvalidInput, "random_regular: 1 <= d < n");
  require((static_cast<long long>(n) * d) % 2 == 0, ErrorCode::InvalidInput,
          "random_regular: n*d must be even");
  std::mt19937_64 rng(seed);
  // Pairing model with rejection of self-loops and multi-edges.
  for (int attempt = 0; attempt < 2000; ++attempt) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<size_t>(n) * d);
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < d; ++k) stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<Edge> e;
    bool ok = true;
    for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) { ok = false; break; }
      if (u > v) std::swap(u, v);
      if (!e.insert({u, v}).second) { ok = false; break; }
    }
    if (!ok) continue;
    return build(n, {e.begin(), e.end()}, false);
  }
  throw Error(ErrorCode::Internal, "random_regular: pairing retries exhausted");
}

bool Graph::has_edge(int u, int v) const {
  require(u >= 0 && u < n_ && v >= 0 && v < n_, ErrorCode::InvalidInput,
          "node index out of range");
  Edge e{u, v};
  if (!directed_ && u > v) e = {v, u};
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

const std::vector<int>& Graph::neighbors(int u) const {
  require(u >= 0 && u < n_, ErrorCode::InvalidInput, "node index out of range");
  return nbrs_[u];
}

const std::vector<int>& Graph::in_neighbors(int v) const {
  require(v >= 0 && v < n_, ErrorCode::InvalidInput, "node index out of range");
  return in_[v];
}

const std::vector<int>& Graph::out_neighbors(int u) const {
  require(u >= 0 && u < n_, ErrorCode::InvalidInput, "node index out of range");
  return out_[u];
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (auto [u, v] : edges_) {
    a(u, v) = 1.0;
    if (!directed_) a(v, u) = 1.0;
  }
  return a;
}

Graph Graph::with_self_loops() const {
  std::vector<Edge> e = edges_;
  for (int v = 0; v < n_; ++v)
    if (!has_edge(v, v)) e.push_back({v, v});
  return build(n_, e, directed_, true);
}

Graph Graph::with_edge_added(int u, int v) const {
  std::vector<Edge> e = edges_;
  e.push_back({u, v});
  return build(n_, e, directed_, self_loops_);
}

Graph Graph::with_edge_removed(int u, int v) const {
  Edge target{u, v};
  if (!directed_ && u > v) target = {v, u};
  require(has_edge(u, v), ErrorCode::InvalidInput, "edge to remove is absent");
  std::vector<Edge> e;
  for (auto ed : edges_)
    if (ed != target) e.push_back(ed);
  return build(n_, e, directed_, self_loops_);
}

bool Graph::connected() const {
  std::vector<char> vis(n_, 0);
  std::queue<int> q;
  q.push(0);
  vis[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : nbrs_[u])
      if (!vis[v]) {
        vis[v] = 1;
        ++count;
        q.push(v);
      }
  }
  return count == n_;
}

std::vector<int> Graph::bfs_distances(int s, bool reverse) const {
  require(s >= 0 && s < n_, ErrorCode::InvalidInput, "node index out of range");
  std::vector<int> dist(n_, -1);
  std::queue<int> q;
  dist[s] = 0;
  q.push(s);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    const auto& next = directed_ ? (reverse ? in_[u] : out_[u]) : nbrs_[u];
    for (int v : next)
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

int Graph::distance(int u, int v) const {
  std::vector<char> vis(n_, 0);
  std::queue<std::pair<int, int>> q;
  q.push({u, 0});
  vis[u] = 1;
  while (!q.empty()) {
    auto [x, d] = q.front();
    q.pop();
    if (x == v) return d;
    for (int y : nbrs_[x])
      if (!vis[y]) {
        vis[y] = 1;
        q.push({y, d + 1});
      }
  }
  return -1;
}

std::string Graph::to_edgelist() const {
  std::ostringstream os;
  os << "n " << n_ << " " << (directed_ ? "directed" : "undirected") << "\n";
  for (auto [u, v] : edges_) os << u << " " << v << "\n";
  return os.str();
}

Graph Graph::from_edgelist(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int n = -1;
  bool directed = false;
  bool header = false;
  bool any_self = false;
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    if (!header) {
      std::string tag, kind;
      if (!(ls >> tag)) continue;  // blank line before header
      require(tag == "n", ErrorCode::InvalidInput,
              "edge-list: expected header 'n <count> <directed|undirected>'");
      require(static_cast<bool>(ls >> n >> kind), ErrorCode::InvalidInput,
              "edge-list: malformed header");
      require(kind == "directed" || kind == "undirected", ErrorCode::InvalidInput,
              "edge-list: direction must be 'directed' or 'undirected'");
      directed = kind == "directed";
      header = true;
      continue;
    }
    int u, v;
    if (!(ls >> u)) continue;
    require(static_cast<bool>(ls >> v), ErrorCode::InvalidInput,
            "edge-list: malformed edge line: " + line);
    if (u == v) any_self = true;
    edges.push_back({u, v});
  }
  require(header, ErrorCode::InvalidInput, "edge-list: missing header line");
  return build(n, edges, directed, any_self);
}

std::string Graph::to_json_string() const {
  nlohmann::json j;
  j["n"] = n_;
  j["directed"] = directed_;
  j["edges"] = nlohmann::json::array();
  for (auto [u, v] : edges_) j["edges"].push_back({u, v});
  return j.dump();
}

Graph Graph::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("graph json: ") + e.what());
  }
  require(j.contains("n") && j.contains("edges"), ErrorCode::InvalidInput,
          "graph json: need fields n, edges");
  std::vector<Edge> edges;
  bool any_self = false;
  for (const auto& e : j["edges"]) {
    require(e.is_array() && e.size() == 2, ErrorCode::InvalidInput,
            "graph json: edges must be [u,v] pairs");
    int u = e[0].get<int>(), v = e[1].get<int>();
    if (u == v) any_self = true;
    edges.push_back({u, v});
  }
  return build(j["n"].get<int>(), edges, j.value("directed", false), any_self);
}

AdjacencyPower adjacency_power(const Graph& g, int m) {
  require(m >= 0, ErrorCode::InvalidInput, "adjacency_power: m >= 0");
  const int n = g.node_count();
  auto idx = [n](int i, int s) { return static_cast<size_t>(i) * n + s; };
  std::vector<std::uint64_t> a(static_cast<size_t>(n) * n, 0);
  // base adjacency: a[i][s] = 1 iff arc s -> i
  for (auto [u, v] : g.edges()) {
    a[idx(v, u)] = 1;
    if (!g.directed()) a[idx(u, v)] = 1;
  }
  std::vector<std::uint64_t> r(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) r[idx(i, i)] = 1;
  std::vector<std::uint64_t> tmp(static_cast<size_t>(n) * n);
  for (int p = 0; p < m; ++p) {
    std::fill(tmp.begin(), tmp.end(), 0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        std::uint64_t aik = a[idx(i, k)];
        if (!aik) continue;
        for (int s = 0; s < n; ++s) {
          std::uint64_t prod, sum;
          if (__builtin_mul_overflow(aik, r[idx(k, s)], &prod) ||
              __builtin_add_overflow(tmp[idx(i, s)], prod, &sum))
            throw Error(ErrorCode::Overflow,
                        "adjacency_power: walk count overflow at power " +
                            std::to_string(p + 1));
          tmp[idx(i, s)] = sum;
        }
      }
    r.swap(tmp);
  }
  return {m, n, std::move(r)};
}

std::vector<int> receptive_field(const Graph& g, int node, int hops) {
  require(hops >= 0, ErrorCode::InvalidInput, "receptive_field: hops >= 0");
  auto dist = g.bfs_distances(node, /*reverse=*/true);
  std::vector<int> out;
  for (int v = 0; v < g.node_count(); ++v)
    if (dist[v] >= 0 && dist[v] <= hops) out.push_back(v);
  return out;
}

}  // namespace propgraph
