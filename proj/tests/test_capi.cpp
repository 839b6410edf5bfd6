#include <cstring>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "propgraph.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  pg_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and error state") {
  CHECK(pg_version() != nullptr);
  CHECK(std::strlen(pg_version()) > 0);
}

TEST_CASE("graph construction through the C interface") {
  pg_graph* g = nullptr;
  REQUIRE(pg_graph_generate("path", "{\"n\":4}", &g) == PG_OK);
  char* info = nullptr;
  REQUIRE(pg_graph_info(g, &info) == PG_OK);
  json j = json::parse(take(info));
  CHECK(j["n"] == 4);
  CHECK(j["edges"] == 3);
  CHECK(j["connected"] == true);

  char* text = nullptr;
  REQUIRE(pg_graph_format(g, &text) == PG_OK);
  std::string edgelist = take(text);
  pg_graph_free(g);

  pg_graph* back = nullptr;
  REQUIRE(pg_graph_parse(edgelist.c_str(), &back) == PG_OK);
  char* jtext = nullptr;
  REQUIRE(pg_graph_format_json(back, &jtext) == PG_OK);
  json gj = json::parse(take(jtext));
  CHECK(gj["n"] == 4);
  pg_graph_free(back);
}

TEST_CASE("error codes and messages") {
  pg_graph* g = nullptr;
  CHECK(pg_graph_parse("not a graph", &g) == PG_INPUT_ERROR);
  CHECK(std::strlen(pg_last_error()) > 0);
  CHECK(pg_graph_parse(nullptr, &g) == PG_USAGE_ERROR);
  CHECK(pg_graph_generate("pentagram", "{\"n\":3}", &g) == PG_INPUT_ERROR);
  CHECK(pg_analyze(nullptr, nullptr) == PG_USAGE_ERROR);
  char* out = nullptr;
  CHECK(pg_analyze("{ not json", &out) == PG_INPUT_ERROR);
}

TEST_CASE("analysis bundle round trip") {
  pg_graph* g = nullptr;
  REQUIRE(pg_graph_generate("complete", "{\"n\":4}", &g) == PG_OK);
  char* text = nullptr;
  REQUIRE(pg_graph_format(g, &text) == PG_OK);
  std::string edgelist = take(text);
  pg_graph_free(g);

  json request{{"graph", edgelist},
               {"spectral", true},
               {"cheeger_exact", true}};
  char* bundle_text = nullptr;
  REQUIRE(pg_analyze(request.dump().c_str(), &bundle_text) == PG_OK);
  std::string bundle_str = take(bundle_text);
  json bundle = json::parse(bundle_str);
  CHECK(bundle["outputs"]["cheeger"]["inequality_verdict"] == "PASS");

  char* status = nullptr;
  REQUIRE(pg_bundle_status(bundle_str.c_str(), &status) == PG_OK);
  CHECK(take(status) == "ok");

  // Regenerating from the manifest reproduces everything but the timestamp.
  char* again = nullptr;
  REQUIRE(pg_report_rerun(bundle["manifest"].dump().c_str(), &again) == PG_OK);
  json b2 = json::parse(take(again));
  bundle["manifest"].erase("timestamp");
  b2["manifest"].erase("timestamp");
  CHECK(bundle.dump() == b2.dump());
}

TEST_CASE("refused analyses surface through bundle status") {
  json request{{"graph", "n 4 undirected\n0 1\n2 3\n"}, {"spectral", true}};
  char* bundle_text = nullptr;
  REQUIRE(pg_analyze(request.dump().c_str(), &bundle_text) == PG_OK);
  std::string bundle = take(bundle_text);
  char* status = nullptr;
  REQUIRE(pg_bundle_status(bundle.c_str(), &status) == PG_OK);
  CHECK(take(status) == "refused");
}

TEST_CASE("simulate and rewire through the C interface") {
  json sim{{"model", {{"arch", "transformer"}, {"layers", 1}, {"dim", 4},
                      {"seed", 1}, {"causal", true}, {"uniform_attention", true}}},
           {"n", 4},
           {"diags", {"sink"}}};
  char* out = nullptr;
  REQUIRE(pg_simulate(sim.dump().c_str(), &out) == PG_OK);
  json sb = json::parse(take(out));
  CHECK(sb["outputs"]["sink"]["mass"][0][0].get<double>() ==
        doctest::Approx(25.0 / 48.0));

  json rw{{"graph", "n 3 undirected\n0 1\n1 2\n"},
          {"objective", "spectral_gap"},
          {"budget", 1}};
  REQUIRE(pg_rewire(rw.dump().c_str(), &out) == PG_OK);
  json rb = json::parse(take(out));
  CHECK(rb["outputs"]["plan"]["steps"][0]["edge"] == json::array({0, 2}));
}
