#include <doctest.h>

#include "propgraph/curvature.hpp"
#include "propgraph/rewiring.hpp"
#include "propgraph/spectral.hpp"

using namespace propgraph;

TEST_CASE("spectral step on P3 closes the triangle") {
  RewirePlan p = rewire_greedy(Graph::path(3), RewireObjective::SpectralGap, 1);
  REQUIRE(p.steps.size() == 1);
  CHECK(p.steps[0].add);
  CHECK(p.steps[0].edge == Edge{0, 2});
  CHECK(p.steps[0].objective_before == doctest::Approx(1.0));
  CHECK(p.steps[0].objective_after == doctest::Approx(1.5));
}

TEST_CASE("curvature step on barbell lifts the minimum above -4") {
  Graph g = Graph::barbell(4);
  RewirePlan p = rewire_greedy(g, RewireObjective::Curvature, 1);
  REQUIRE(p.steps.size() == 1);
  CHECK(p.steps[0].objective_before == doctest::Approx(-4.0));
  CHECK(p.steps[0].objective_after > -4.0);
  Graph rewired = apply_plan(g, p);
  CHECK(forman_curvature_map(rewired).min_value ==
        doctest::Approx(p.steps[0].objective_after));
}

TEST_CASE("degenerate and invalid greedy inputs") {
  CHECK(rewire_greedy(Graph::path(4), RewireObjective::SpectralGap, 0).steps.empty());
  CHECK_THROWS_AS(rewire_greedy(Graph::complete(4), RewireObjective::SpectralGap, 1),
                  Error);
  CHECK_THROWS_AS(rewire_greedy(Graph::causal(3), RewireObjective::SpectralGap, 1),
                  Error);
  Graph disc = Graph::build(4, {{0, 1}, {2, 3}}, false);
  CHECK_THROWS_AS(rewire_greedy(disc, RewireObjective::SpectralGap, 1), Error);
  CHECK_THROWS_AS(rewire_greedy(Graph::path(4), RewireObjective::SpectralGap, 1,
                                /*allow_delete=*/true),
                  Error);
}

TEST_CASE("greedy steps strictly improve and chain consistently") {
  for (RewireObjective obj : {RewireObjective::SpectralGap,
                              RewireObjective::Curvature,
                              RewireObjective::Resistance}) {
    RewirePlan p = rewire_greedy(Graph::barbell(4), obj, 3);
    REQUIRE(!p.steps.empty());
    for (size_t i = 0; i < p.steps.size(); ++i) {
      double gain = obj == RewireObjective::Resistance
                        ? p.steps[i].objective_before - p.steps[i].objective_after
                        : p.steps[i].objective_after - p.steps[i].objective_before;
      CHECK(gain > 0.0);
      if (i > 0)
        CHECK(p.steps[i].objective_before ==
              doctest::Approx(p.steps[i - 1].objective_after));
    }
  }
}

TEST_CASE("plans are deterministic and replayable") {
  Graph g = Graph::barbell(4);
  RewirePlan a = rewire_greedy(g, RewireObjective::SpectralGap, 2);
  RewirePlan b = rewire_greedy(g, RewireObjective::SpectralGap, 2);
  REQUIRE(a.steps.size() == b.steps.size());
  for (size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].edge == b.steps[i].edge);
    CHECK(a.steps[i].add == b.steps[i].add);
  }
  Graph ra = apply_plan(g, a);
  Graph rb = apply_plan(g, b);
  CHECK(ra.edges() == rb.edges());
}

TEST_CASE("resistance objective with deletions keeps the graph connected") {
  Graph g = Graph::cycle(6);
  RewirePlan p = rewire_greedy(g, RewireObjective::Resistance, 2,
                               /*allow_delete=*/true);
  Graph rewired = apply_plan(g, p);
  CHECK(rewired.connected());
  // Rayleigh: for pure additions the total resistance cannot rise.
  for (const auto& s : p.steps)
    if (s.add)
      CHECK(s.objective_after <= s.objective_before);
}

TEST_CASE("expander overlay certificates") {
  ExpanderResult k4 = expander_overlay(4, 3, 1);
  CHECK(k4.graph.edge_count() == 6);  // the only simple 3-regular graph on 4 nodes
  CHECK(k4.spectral_gap == doctest::Approx(4.0 / 3.0));

  ExpanderResult e = expander_overlay(10, 3, 7);
  CHECK(e.spectral_gap >= 0.2);
  ExpanderResult e2 = expander_overlay(10, 3, 7);
  CHECK(e.graph.edges() == e2.graph.edges());

  ExpanderResult any = expander_overlay(10, 3, 7, /*gap_floor=*/0.0);
  CHECK(any.spectral_gap > 0.0);
  CHECK_THROWS_AS(expander_overlay(5, 3, 1), Error);   // odd n*d
  CHECK_THROWS_AS(expander_overlay(10, 2, 1), Error);  // d < 3
}

TEST_CASE("fully-connected last layer schedule") {
  LayerTopologySchedule one = schedule_fc_last(Graph::barbell(4), 1);
  REQUIRE(one.layers.size() == 1);
  CHECK(one.layers[0].edge_count() == 28);  // K8

  LayerTopologySchedule three = schedule_fc_last(Graph::barbell(4), 3);
  REQUIRE(three.layers.size() == 3);
  CHECK(three.layers[0].edges() == Graph::barbell(4).edges());
  CHECK(three.layers[1].edges() == Graph::barbell(4).edges());
  CHECK(three.layers[2].edge_count() == 28);
  // Final complete layer makes every receptive field global.
  for (int u = 0; u < 8; ++u)
    CHECK(receptive_field(three.layers[2], u, 1).size() == 8);
}

TEST_CASE("objective string round trip") {
  for (RewireObjective o : {RewireObjective::SpectralGap,
                            RewireObjective::Curvature,
                            RewireObjective::Resistance})
    CHECK(objective_from_string(to_string(o)) == o);
  CHECK_THROWS_AS(objective_from_string("bogus"), Error);
}
