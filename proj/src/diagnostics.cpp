#include "propgraph/diagnostics.hpp"

#include <cmath>

namespace propgraph {

double dirichlet_energy(const Eigen::MatrixXd& h, const Graph& g) {
  require(h.rows() == g.node_count(), ErrorCode::InvalidInput,
          "dirichlet_energy: feature rows must match node count");
  const int n = g.node_count();
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j : g.neighbors(i)) sum += (h.row(i) - h.row(j)).squaredNorm();
  return sum / n;
}

double feature_diameter(const Eigen::MatrixXd& h) {
  double diam = 0.0;
  for (int i = 0; i < h.rows(); ++i)
    for (int j = i + 1; j < h.rows(); ++j)
      diam = std::max(diam, (h.row(i) - h.row(j)).norm());
  return diam;
}

OversmoothingCurve oversmoothing_curve(const LayerTrace& trace, const Graph& g) {
  // Causal traces are measured on the undirected support of the graph.
  OversmoothingCurve c;
  c.energy.metric = "dirichlet_energy";
  c.diameter.metric = "feature_diameter";
  for (size_t l = 0; l < trace.features.size(); ++l) {
    const auto& h = trace.features[l];
    double e = h.rows() == g.node_count()
                   ? dirichlet_energy(h, g)
                   : dirichlet_energy(h, Graph::causal(static_cast<int>(h.rows())));
    c.energy.x.push_back(static_cast<double>(l));
    c.energy.values.push_back(e);
    c.diameter.x.push_back(static_cast<double>(l));
    c.diameter.values.push_back(feature_diameter(h));
  }
  return c;
}

double contraction_factor(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  require(n == a.cols() && n > 0, ErrorCode::InvalidInput,
          "contraction_factor: square matrix required");
  for (int i = 0; i < n; ++i) {
    require(a.row(i).minCoeff() >= -1e-12, ErrorCode::InvalidInput,
            "contraction_factor: entries must be nonnegative");
    require(std::abs(a.row(i).sum() - 1.0) <= 1e-9, ErrorCode::InvalidInput,
            "contraction_factor: rows must sum to 1");
  }
  double factor = 1.0 - n * a.minCoeff();
  return std::clamp(factor, 0.0, 1.0);
}

SinkReport sink_report(const LayerTrace& trace, double threshold_multiple) {
  require(!trace.attention.empty(), ErrorCode::InvalidInput,
          "sink_report: trace carries no attention maps");
  SinkReport r;
  r.threshold_multiple = threshold_multiple;
  if (trace.inserted_prefix > 0) r.placeholder_position = 0;
  const int n = static_cast<int>(trace.attention.front().rows());
  double score_acc = 0.0, baseline_acc = 0.0;
  for (const auto& a : trace.attention) {
    std::vector<double> mass(n, 0.0);
    double baseline = 0.0;
    int baseline_rows = 0;
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      int visible = 0;
      for (int i = 0; i < n; ++i)
        if (a(i, j) != 0.0) {
          acc += a(i, j);
          ++visible;
        }
      mass[j] = visible > 0 ? acc / visible : 0.0;
    }
    // Uniform baseline: expected mass at a position if every row spread its
    // unit mass evenly over its visible entries.
    for (int i = 0; i < n; ++i) {
      int row_support = 0;
      for (int j = 0; j < n; ++j)
        if (a(i, j) != 0.0) ++row_support;
      if (row_support > 0) {
        baseline += 1.0 / row_support;
        ++baseline_rows;
      }
    }
    baseline = baseline_rows > 0 ? baseline / baseline_rows : 0.0;
    r.mass.push_back(mass);
    score_acc += mass[0];
    baseline_acc += baseline;
  }
  for (const auto& v : trace.value_norms)
    r.value_norms.emplace_back(v.data(), v.data() + v.size());
  r.sink_score = score_acc / trace.attention.size();
  r.uniform_baseline = baseline_acc / trace.attention.size();
  r.sink_flagged = r.sink_score > threshold_multiple * r.uniform_baseline;
  return r;
}

std::vector<RunwayPosition> runway_profile(const Graph& g, int layers) {
  const int n = g.node_count();
  require(g.directed(), ErrorCode::InvalidInput, "runway_profile: causal graph required");
  require(layers >= 0, ErrorCode::InvalidInput, "runway_profile: layers >= 0");
  // Verify the lower-triangular causal shape.
  require(g.edge_count() == n * (n + 1) / 2, ErrorCode::InvalidInput,
          "runway_profile: graph is not causal(n)");
  for (auto [u, v] : g.edges())
    require(u <= v, ErrorCode::InvalidInput, "runway_profile: graph is not causal(n)");
  std::vector<RunwayPosition> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].position = i + 1;
    out[i].receptive = i + 1;
    out[i].downstream = n - 1 - i;
    // Paths out of (0,i) in the unrolled DAG with edges (l,p)->(l+1,q), p<=q.
    std::vector<std::uint64_t> p(n, 0);
    p[i] = 1;
    out[i].path_counts.push_back(1);
    for (int l = 0; l < layers; ++l) {
      std::vector<std::uint64_t> next(n, 0);
      std::uint64_t prefix = 0, total = 0;
      for (int q = 0; q < n; ++q) {
        if (__builtin_add_overflow(prefix, p[q], &prefix) ||
            __builtin_add_overflow(total, prefix, &total))
          throw Error(ErrorCode::Overflow, "runway_profile: path count overflow");
        next[q] = prefix;
      }
      p.swap(next);
      out[i].path_counts.push_back(total);
    }
  }
  return out;
}

std::vector<UnderreachingViolation> underreaching_check(const Model& model,
                                                        const Graph& g,
                                                        int layers,
                                                        const Eigen::MatrixXd& x,
                                                        double tol) {
  require(layers >= 1 && layers <= model.config().layers, ErrorCode::InvalidInput,
          "underreaching_check: invalid layer count");
  const int n = g.node_count();
  std::vector<UnderreachingViolation> violations;
  for (int u = 0; u < n; ++u) {
    auto dist = g.bfs_distances(u, /*reverse=*/true);  // dist from v into u
    for (int v = 0; v < n; ++v) {
      if (dist[v] >= 0 && dist[v] <= layers) continue;
      auto j = model.empirical_jacobian(g, x, 0, layers, u, v);
      if (j.max_abs > tol) violations.push_back({u, v, j.max_abs});
    }
  }
  return violations;
}

TraceSeries last_token_collapse(const ModelConfig& cfg,
                                const std::vector<int>& lengths,
                                std::uint64_t seed) {
  require(cfg.arch == Arch::Transformer && cfg.causal, ErrorCode::InvalidInput,
          "last_token_collapse: causal transformer config required");
  Model model(cfg);
  TraceSeries s;
  s.metric = "last_token_difference";
  Eigen::MatrixXd tok_a = seeded_features(1, cfg.dim, seed, "collapse_tok_a");
  Eigen::MatrixXd tok_b = seeded_features(1, cfg.dim, seed, "collapse_tok_b");
  for (int n : lengths) {
    require(n >= 1, ErrorCode::InvalidInput, "last_token_collapse: lengths >= 1");
    Graph g = Graph::causal(n);
    Eigen::MatrixXd x = seeded_features(n, cfg.dim, seed, "collapse_context");
    Eigen::MatrixXd xa = x, xb = x;
    xa.row(n - 1) = tok_a.row(0);
    xb.row(n - 1) = tok_b.row(0);
    LayerTrace ta = model.forward(g, xa);
    LayerTrace tb = model.forward(g, xb);
    // Final real token sits before any appended pause rows.
    int last = static_cast<int>(ta.features.back().rows()) - 1 - ta.inserted_suffix;
    double diff = (ta.features.back().row(last) - tb.features.back().row(last)).norm();
    s.x.push_back(static_cast<double>(n));
    s.values.push_back(diff);
  }
  return s;
}

}  // namespace propgraph
