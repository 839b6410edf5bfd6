#include <cmath>
#include <vector>

#include <doctest.h>

#include "propgraph/models.hpp"

using namespace propgraph;

namespace {

ModelConfig base_cfg(Arch arch) {
  ModelConfig c;
  c.arch = arch;
  c.layers = 2;
  c.dim = 4;
  c.seed = 42;
  if (arch == Arch::Transformer) c.causal = true;
  return c;
}

}  // namespace

TEST_CASE("weights are deterministic per config") {
  ModelConfig cfg = base_cfg(Arch::Transformer);
  Model a(cfg), b(cfg);
  Graph g = Graph::causal(5);
  Eigen::MatrixXd x = seeded_features(5, 4, 3, "in");
  LayerTrace ta = a.forward(g, x), tb = b.forward(g, x);
  for (size_t l = 0; l < ta.features.size(); ++l)
    CHECK((ta.features[l].array() == tb.features[l].array()).all());
}

TEST_CASE("invalid flag combinations are rejected") {
  ModelConfig c = base_cfg(Arch::MeanGnn);
  c.causal = true;
  CHECK_THROWS_AS(Model{c}, Error);
  c = base_cfg(Arch::Gin);
  c.pause_count = 2;
  CHECK_THROWS_AS(Model{c}, Error);
  c = base_cfg(Arch::Transformer);
  c.causal = false;
  c.sink_token = true;
  CHECK_THROWS_AS(Model{c}, Error);
  c = base_cfg(Arch::Gat);
  c.unit_weights = true;
  CHECK_THROWS_AS(Model{c}, Error);
}

TEST_CASE("gin layer matches the hand formula at epsilon zero") {
  ModelConfig cfg = base_cfg(Arch::Gin);
  cfg.layers = 1;
  Model m(cfg);
  Graph g = Graph::path(3);
  Eigen::MatrixXd x = seeded_features(3, 4, 9, "in");
  Eigen::MatrixXd h = m.forward(g, x).features.back();
  // (1+0)h_i + sum of neighbours, then the two-layer map.
  Eigen::MatrixXd z = x;
  for (int i = 0; i < 3; ++i)
    for (int j : g.neighbors(i)) z.row(i) += x.row(j);
  Eigen::MatrixXd want =
      (z * m.weight(0, "w1")).array().tanh().matrix() * m.weight(0, "w2");
  CHECK((h - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pause count zero equals the no-pause model") {
  ModelConfig a = base_cfg(Arch::Transformer);
  ModelConfig b = a;
  b.pause_count = 0;
  Graph g = Graph::causal(4);
  Eigen::MatrixXd x = seeded_features(4, 4, 5, "in");
  Eigen::MatrixXd ha = Model(a).forward(g, x).features.back();
  Eigen::MatrixXd hb = Model(b).forward(g, x).features.back();
  CHECK((ha.array() == hb.array()).all());
}

TEST_CASE("pause tokens extend the sequence on the chosen side") {
  ModelConfig cfg = base_cfg(Arch::Transformer);
  cfg.pause_count = 2;
  cfg.pause_placement = PausePlacement::Append;
  Model m(cfg);
  Graph g = Graph::causal(4);
  Eigen::MatrixXd x = seeded_features(4, 4, 5, "in");
  LayerTrace t = m.forward(g, x);
  CHECK(t.features[0].rows() == 6);
  CHECK(t.inserted_suffix == 2);
  CHECK((t.features[0].topRows(4) - x).cwiseAbs().maxCoeff() == 0.0);

  cfg.pause_placement = PausePlacement::Prepend;
  LayerTrace tp = Model(cfg).forward(g, x);
  CHECK(tp.inserted_prefix == 2);
  CHECK((tp.features[0].bottomRows(4) - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("forced-uniform single layer averages the values") {
  ModelConfig cfg = base_cfg(Arch::Transformer);
  cfg.layers = 1;
  cfg.uniform_attention = true;
  Model m(cfg);
  const int n = 5;
  Graph g = Graph::causal(n);
  Eigen::MatrixXd x = seeded_features(n, 4, 8, "in");
  Eigen::MatrixXd h = m.forward(g, x).features.back();
  Eigen::MatrixXd v = x * m.weight(0, "w_v");
  Eigen::RowVectorXd want =
      (v.colwise().sum() / static_cast<double>(n)) * m.weight(0, "w_o");
  CHECK((h.row(n - 1) - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("gat attention over a single neighbour is exactly one") {
  ModelConfig cfg = base_cfg(Arch::Gat);
  cfg.layers = 1;
  Model m(cfg);
  Graph g = Graph::path(2);
  Eigen::MatrixXd x = seeded_features(2, 4, 1, "in");
  LayerTrace t = m.forward(g, x);
  REQUIRE(t.attention.size() == 1);
  CHECK(t.attention[0](0, 1) == 1.0);
  CHECK(t.attention[0](1, 0) == 1.0);
  CHECK(t.attention[0](0, 0) == 0.0);
}

TEST_CASE("causal attention is lower-triangular and row one fixed") {
  ModelConfig cfg = base_cfg(Arch::Transformer);
  cfg.layers = 3;
  cfg.pure_attention = true;
  Model m(cfg);
  const int n = 6;
  Graph g = Graph::causal(n);
  Eigen::MatrixXd x = seeded_features(n, 4, 2, "in");
  LayerTrace t = m.forward(g, x);
  for (const auto& a : t.attention) {
    for (int i = 0; i < n; ++i) {
      CHECK(a.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (int j = i + 1; j < n; ++j) CHECK(a(i, j) == 0.0);
    }
  }
  for (const auto& h : t.features)
    CHECK((h.row(0) - x.row(0)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("empirical jacobian matches the hand-assembled linear map") {
  ModelConfig cfg = base_cfg(Arch::MeanGnn);
  cfg.layers = 1;
  cfg.linear_mode = true;
  cfg.include_self = false;
  Model m(cfg);
  Graph g = Graph::path(3);
  Eigen::MatrixXd x = seeded_features(3, 4, 6, "in");
  // h_0' = h_0 W_self + h_1 W_agg (node 0 has a single neighbour), so the
  // (0,1) block is W_agg transposed.
  auto j = m.empirical_jacobian(g, x, 0, 1, 0, 1);
  Eigen::MatrixXd want = m.weight(0, "w_agg").transpose();
  CHECK((j.block - want).cwiseAbs().maxCoeff() <= 1e-6);
  // Center node averages two neighbours: blocks carry the 1/deg factor.
  auto jc = m.empirical_jacobian(g, x, 0, 1, 1, 0);
  CHECK((jc.block - 0.5 * want).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("lazy self-inclusive averaging carries 1/(deg+1) factors") {
  ModelConfig cfg = base_cfg(Arch::MeanGnn);
  cfg.layers = 1;
  cfg.linear_mode = true;
  Model m(cfg);
  Graph g = Graph::path(3);
  Eigen::MatrixXd x = seeded_features(3, 4, 6, "in");
  auto j = m.empirical_jacobian(g, x, 0, 1, 0, 1);
  Eigen::MatrixXd want = 0.5 * m.weight(0, "w_agg").transpose();
  CHECK((j.block - want).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("span zero jacobian is the identity pattern") {
  ModelConfig cfg = base_cfg(Arch::MeanGnn);
  Model m(cfg);
  Graph g = Graph::path(3);
  Eigen::MatrixXd x = seeded_features(3, 4, 6, "in");
  auto same = m.empirical_jacobian(g, x, 0, 0, 1, 1);
  CHECK((same.block - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
        0.0);
  auto off = m.empirical_jacobian(g, x, 0, 0, 1, 2);
  CHECK(off.max_abs == 0.0);
}

TEST_CASE("permutation equivariance of non-causal archs") {
  std::vector<int> perm{2, 0, 3, 1};
  Graph g = Graph::cycle(4);
  std::vector<Edge> mapped;
  for (auto [u, v] : g.edges()) {
    int a = perm[u], b = perm[v];
    mapped.push_back({std::min(a, b), std::max(a, b)});
  }
  Graph gp = Graph::build(4, mapped, false);
  Eigen::MatrixXd x = seeded_features(4, 4, 7, "in");
  Eigen::MatrixXd xp(4, 4);
  for (int i = 0; i < 4; ++i) xp.row(perm[i]) = x.row(i);
  for (Arch arch : {Arch::MeanGnn, Arch::Gin, Arch::Gat}) {
    Model m(base_cfg(arch));
    Eigen::MatrixXd h = m.forward(g, x).features.back();
    Eigen::MatrixXd hp = m.forward(gp, xp).features.back();
    for (int i = 0; i < 4; ++i)
      CHECK((hp.row(perm[i]) - h.row(i)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("lipschitz constants reflect the weights") {
  ModelConfig cfg = base_cfg(Arch::MeanGnn);
  cfg.linear_mode = true;
  cfg.unit_weights = true;
  BoundSpec s = Model(cfg).lipschitz_constants();
  CHECK(s.alpha == doctest::Approx(1.0));
  CHECK(s.beta == doctest::Approx(1.0));
  CHECK(s.c_beta == doctest::Approx(1.0));
  CHECK(s.c_alpha == doctest::Approx(0.0));
  CHECK(s.d == 4);

  ModelConfig rnd = base_cfg(Arch::MeanGnn);
  Model m(rnd);
  BoundSpec sr = m.lipschitz_constants();
  double w = 0.0;
  for (int l = 0; l < rnd.layers; ++l)
    w = std::max({w, m.weight(l, "w_self").cwiseAbs().maxCoeff(),
                  m.weight(l, "w_agg").cwiseAbs().maxCoeff()});
  CHECK(sr.w == doctest::Approx(w));
  CHECK(sr.alpha >= sr.c_alpha - 1e-12);
}

TEST_CASE("residual and layernorm variants stay finite and differ") {
  ModelConfig cfg = base_cfg(Arch::Transformer);
  Graph g = Graph::causal(5);
  Eigen::MatrixXd x = seeded_features(5, 4, 11, "in");
  Eigen::MatrixXd plain = Model(cfg).forward(g, x).features.back();
  cfg.residual = true;
  Eigen::MatrixXd res = Model(cfg).forward(g, x).features.back();
  cfg.layernorm = true;
  Eigen::MatrixXd ln = Model(cfg).forward(g, x).features.back();
  CHECK(plain.allFinite());
  CHECK(res.allFinite());
  CHECK(ln.allFinite());
  CHECK((plain - res).cwiseAbs().maxCoeff() > 1e-9);
}

TEST_CASE("input validation on forward") {
  Model m(base_cfg(Arch::MeanGnn));
  Graph g = Graph::path(3);
  CHECK_THROWS_AS(m.forward(g, Eigen::MatrixXd::Zero(2, 4)), Error);
  CHECK_THROWS_AS(m.forward(g, Eigen::MatrixXd::Zero(3, 5)), Error);
}

TEST_CASE("seeded features are deterministic and stream-separated") {
  Eigen::MatrixXd a = seeded_features(4, 3, 5, "x");
  Eigen::MatrixXd b = seeded_features(4, 3, 5, "x");
  Eigen::MatrixXd c = seeded_features(4, 3, 5, "y");
  CHECK((a.array() == b.array()).all());
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}
