#ifndef PROPGRAPH_SPECTRAL_HPP
#define PROPGRAPH_SPECTRAL_HPP

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "propgraph/graph.hpp"

namespace propgraph {

enum class LaplacianKind { Combinatorial, Normalized };

struct SpectralSummary {
  LaplacianKind kind = LaplacianKind::Normalized;
  std::vector<double> eigenvalues;        // ascending
  double spectral_gap = 0.0;              // smallest eigenvalue > tol
  std::optional<double> cheeger_exact;    // h_G when computed
  std::optional<std::pair<double, double>> cheeger_bounds;  // (h^2/2, 2h)
};

// Relative zero threshold for eigenvalues.
inline constexpr double kSpectralTol = 1e-9;

// Self-loops are ignored (they cancel in the Laplacian). Requires an
// undirected connected graph; disconnected input is refused because
// lambda_1 = 0 is not a spectral gap.
Eigen::MatrixXd laplacian(const Graph& g, LaplacianKind kind);
SpectralSummary laplacian_spectrum(const Graph& g, LaplacianKind kind);

// Exact minimum conductance over all cuts: cut(S,~S)/min(vol S, vol ~S),
// vol = sum of degrees. Exhaustive over 2^(n-1)-1 cuts; refuses n > 20.
double cheeger_constant_exact(const Graph& g);

struct ResistanceMatrix {
  Eigen::MatrixXd values;  // symmetric, zero diagonal
  int edge_count = 0;
};

// R_uv = L+_uu + L+_vv - 2 L+_uv from the combinatorial-Laplacian
// pseudoinverse; unit conductance per edge.
ResistanceMatrix effective_resistance_matrix(const Graph& g);

// C_uv = 2 m R_uv.
double commute_time(const Graph& g, int u, int v);

}  // namespace propgraph

#endif
