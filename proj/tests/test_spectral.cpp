#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "propgraph/spectral.hpp"

using namespace propgraph;

namespace {

// Small deterministic connected graphs for property checks.
std::vector<Graph> sample_graphs() {
  return {Graph::path(5),    Graph::cycle(6),      Graph::complete(4),
          Graph::barbell(4), Graph::grid(3, 3),    Graph::random_regular(8, 3, 1),
          Graph::path(2),    Graph::random_regular(10, 3, 4)};
}

// Exhaustive conductance minimum, written independently of the library.
double cheeger_oracle(const Graph& g) {
  const int n = g.node_count();
  double total_vol = 0.0;
  for (int u = 0; u < n; ++u) total_vol += g.degree(u);
  double best = 1e300;
  for (unsigned mask = 1; mask < (1u << n) - 1; ++mask) {
    double vol = 0.0, cut = 0.0;
    for (int u = 0; u < n; ++u)
      if (mask & (1u << u)) vol += g.degree(u);
    for (auto [u, v] : g.edges())
      if (((mask >> u) & 1u) != ((mask >> v) & 1u)) cut += 1.0;
    best = std::min(best, cut / std::min(vol, total_vol - vol));
  }
  return best;
}

}  // namespace

TEST_CASE("normalized spectra of canonical graphs") {
  SpectralSummary p3 = laplacian_spectrum(Graph::path(3), LaplacianKind::Normalized);
  REQUIRE(p3.eigenvalues.size() == 3);
  CHECK(p3.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(p3.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(p3.eigenvalues[2] == doctest::Approx(2.0));
  CHECK(p3.spectral_gap == doctest::Approx(1.0));

  SpectralSummary k4 =
      laplacian_spectrum(Graph::complete(4), LaplacianKind::Normalized);
  CHECK(k4.spectral_gap == doctest::Approx(4.0 / 3.0));

  SpectralSummary p2 = laplacian_spectrum(Graph::path(2), LaplacianKind::Normalized);
  CHECK(p2.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(p2.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(p2.spectral_gap == doctest::Approx(2.0));
}

TEST_CASE("spectrum invariants") {
  for (const Graph& g : sample_graphs()) {
    SpectralSummary s = laplacian_spectrum(g, LaplacianKind::Normalized);
    CHECK(std::abs(s.eigenvalues.front()) <= 1e-9);
    for (size_t i = 1; i < s.eigenvalues.size(); ++i) {
      CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1] - 1e-12);
      CHECK(s.eigenvalues[i] <= 2.0 + 1e-9);
    }
    CHECK(s.spectral_gap > 0.0);
  }
}

TEST_CASE("disconnected and directed inputs are refused") {
  Graph two = Graph::build(4, {{0, 1}, {2, 3}}, false);
  CHECK_THROWS_AS(laplacian_spectrum(two, LaplacianKind::Normalized), Error);
  CHECK_THROWS_AS(laplacian_spectrum(Graph::causal(3), LaplacianKind::Normalized),
                  Error);
}

TEST_CASE("exact Cheeger constants") {
  CHECK(cheeger_constant_exact(Graph::complete(4)) == doctest::Approx(2.0 / 3.0));
  CHECK(cheeger_constant_exact(Graph::path(2)) == doctest::Approx(1.0));
  CHECK(cheeger_constant_exact(Graph::barbell(4)) == doctest::Approx(1.0 / 13.0));
  for (const Graph& g : sample_graphs())
    CHECK(cheeger_constant_exact(g) == doctest::Approx(cheeger_oracle(g)));
  CHECK_THROWS_AS(cheeger_constant_exact(Graph::cycle(21)), Error);
}

TEST_CASE("Cheeger inequality on sample graphs") {
  for (const Graph& g : sample_graphs()) {
    double h = cheeger_constant_exact(g);
    double gap = laplacian_spectrum(g, LaplacianKind::Normalized).spectral_gap;
    CHECK(gap >= h * h / 2.0 - 1e-9);
    CHECK(gap <= 2.0 * h + 1e-9);
  }
}

TEST_CASE("effective resistance closed forms") {
  CHECK(effective_resistance_matrix(Graph::path(2)).values(0, 1) ==
        doctest::Approx(1.0));
  CHECK(effective_resistance_matrix(Graph::path(3)).values(0, 2) ==
        doctest::Approx(2.0));
  ResistanceMatrix k3 = effective_resistance_matrix(Graph::complete(3));
  CHECK(k3.values(0, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(k3.edge_count == 3);
}

TEST_CASE("resistance metric axioms") {
  for (const Graph& g : sample_graphs()) {
    ResistanceMatrix r = effective_resistance_matrix(g);
    const int n = g.node_count();
    for (int u = 0; u < n; ++u) {
      CHECK(r.values(u, u) == doctest::Approx(0.0).epsilon(1e-9));
      for (int v = 0; v < n; ++v) {
        CHECK(r.values(u, v) == doctest::Approx(r.values(v, u)));
        CHECK(r.values(u, v) >= -1e-12);
        for (int w = 0; w < n; ++w)
          CHECK(r.values(u, w) <= r.values(u, v) + r.values(v, w) + 1e-9);
      }
    }
  }
}

TEST_CASE("Rayleigh monotonicity under edge addition") {
  for (const Graph& g : {Graph::path(5), Graph::barbell(4), Graph::cycle(6)}) {
    Eigen::MatrixXd before = effective_resistance_matrix(g).values;
    const int n = g.node_count();
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (g.has_edge(u, v)) continue;
        Eigen::MatrixXd after =
            effective_resistance_matrix(g.with_edge_added(u, v)).values;
        CHECK((after - before).maxCoeff() <= 1e-9);
      }
  }
}

TEST_CASE("commute time identity values") {
  CHECK(commute_time(Graph::path(3), 0, 2) == doctest::Approx(8.0));
  CHECK(commute_time(Graph::path(2), 0, 1) == doctest::Approx(2.0));
  CHECK(commute_time(Graph::path(3), 1, 1) == 0.0);
}
