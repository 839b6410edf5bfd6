#include "propgraph/spectral.hpp"

#include <cmath>

namespace propgraph {

namespace {

void check_spectral_input(const Graph& g) {
  require(!g.directed(), ErrorCode::Refused,
          "spectral analysis requires an undirected graph");
  require(g.connected(), ErrorCode::Refused,
          "spectral analysis requires a connected graph");
}

}  // namespace

Eigen::MatrixXd laplacian(const Graph& g, LaplacianKind kind) {
  const int n = g.node_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : g.edges()) {
    if (u == v) continue;  // self-loops cancel in D - A
    a(u, v) = a(v, u) = 1.0;
  }
  Eigen::VectorXd deg = a.rowwise().sum();
  Eigen::MatrixXd l = Eigen::MatrixXd(deg.asDiagonal()) - a;
  if (kind == LaplacianKind::Combinatorial) return l;
  Eigen::VectorXd dinv_sqrt(n);
  for (int i = 0; i < n; ++i)
    dinv_sqrt(i) = deg(i) > 0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
  return dinv_sqrt.asDiagonal() * l * dinv_sqrt.asDiagonal();
}

SpectralSummary laplacian_spectrum(const Graph& g, LaplacianKind kind) {
  check_spectral_input(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(g, kind));
  require(es.info() == Eigen::Success, ErrorCode::Internal, "eigensolve failed");
  SpectralSummary s;
  s.kind = kind;
  s.eigenvalues.assign(es.eigenvalues().data(),
                       es.eigenvalues().data() + g.node_count());
  double scale = std::max(1.0, std::abs(s.eigenvalues.back()));
  double tol = kSpectralTol * scale;
  s.spectral_gap = 0.0;
  for (double ev : s.eigenvalues)
    if (ev > tol) {
      s.spectral_gap = ev;
      break;
    }
  require(s.spectral_gap > 0.0, ErrorCode::Refused,
          "no nonzero eigenvalue found (graph too small or degenerate)");
  return s;
}

double cheeger_constant_exact(const Graph& g) {
  check_spectral_input(g);
  const int n = g.node_count();
  require(n <= 20, ErrorCode::Refused,
          "cheeger_constant_exact: n > 20, exhaustive cut enumeration refused; "
          "use the spectral Cheeger bounds instead");
  require(n >= 2, ErrorCode::Refused, "cheeger_constant_exact: n >= 2");
  std::vector<double> deg(n);
  double total_vol = 0.0;
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    total_vol += deg[v];
  }
  double best = std::numeric_limits<double>::infinity();
  // Node 0 stays on one side: subsets over nodes 1..n-1.
  const std::uint32_t limit = 1u << (n - 1);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    auto in_s = [mask](int v) { return v > 0 && (mask >> (v - 1)) & 1u; };
    double cut = 0.0, vol = 0.0;
    for (int v = 1; v < n; ++v)
      if (in_s(v)) vol += deg[v];
    for (auto [u, v] : g.edges())
      if (u != v && in_s(u) != in_s(v)) cut += 1.0;
    double h = cut / std::min(vol, total_vol - vol);
    best = std::min(best, h);
  }
  return best;
}

ResistanceMatrix effective_resistance_matrix(const Graph& g) {
  check_spectral_input(g);
  const int n = g.node_count();
  Eigen::MatrixXd l = laplacian(g, LaplacianKind::Combinatorial);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
  require(es.info() == Eigen::Success, ErrorCode::Internal, "eigensolve failed");
  double scale = std::max(1.0, std::abs(es.eigenvalues()(n - 1)));
  Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double ev = es.eigenvalues()(k);
    if (ev > kSpectralTol * scale)
      pinv += (1.0 / ev) * es.eigenvectors().col(k) *
              es.eigenvectors().col(k).transpose();
  }
  ResistanceMatrix r;
  r.values = Eigen::MatrixXd::Zero(n, n);
  int m = 0;
  for (auto [u, v] : g.edges())
    if (u != v) ++m;
  r.edge_count = m;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double val = pinv(u, u) + pinv(v, v) - 2.0 * pinv(u, v);
      r.values(u, v) = r.values(v, u) = std::max(0.0, val);
    }
  return r;
}

double commute_time(const Graph& g, int u, int v) {
  require(u >= 0 && u < g.node_count() && v >= 0 && v < g.node_count(),
          ErrorCode::InvalidInput, "commute_time: node index out of range");
  if (u == v) return 0.0;
  ResistanceMatrix r = effective_resistance_matrix(g);
  return 2.0 * r.edge_count * r.values(u, v);
}

}  // namespace propgraph
