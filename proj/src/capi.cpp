#include "propgraph.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include <nlohmann/json.hpp>

#include "propgraph/error.hpp"
#include "propgraph/graph.hpp"
#include "propgraph/report.hpp"
#include "propgraph/verify.hpp"

#ifndef PROPGRAPH_VERSION
#define PROPGRAPH_VERSION "0.0.0"
#endif

using propgraph::Error;
using propgraph::ErrorCode;
using propgraph::Graph;
using nlohmann::json;

struct pg_graph {
  Graph g;
};

namespace {

thread_local std::string g_last_error;

pg_status set_error(pg_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

pg_status status_from(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidInput: return PG_INPUT_ERROR;
    case ErrorCode::Refused: return PG_REFUSED;
    case ErrorCode::Overflow: return PG_REFUSED;  // result would be unfaithful
    case ErrorCode::Internal: return PG_INTERNAL_ERROR;
  }
  return PG_INTERNAL_ERROR;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Shared guard: translates exceptions into status codes.
template <typename Fn>
pg_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PG_OK;
  } catch (const Error& e) {
    return set_error(status_from(e), e.what());
  } catch (const json::exception& e) {
    return set_error(PG_INPUT_ERROR, std::string("json: ") + e.what());
  } catch (const std::exception& e) {
    return set_error(PG_INTERNAL_ERROR, e.what());
  } catch (...) {
    return set_error(PG_INTERNAL_ERROR, "unknown error");
  }
}

pg_status emit(char** out, const std::string& value) {
  *out = dup_string(value);
  if (*out == nullptr) throw Error(ErrorCode::Internal, "allocation failed");
  return PG_OK;
}

pg_status run_bundle_command(const char* name, const char* request_json,
                             char** out_bundle) {
  if (request_json == nullptr || out_bundle == nullptr)
    return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] {
    json request = json::parse(request_json);
    emit(out_bundle, propgraph::run_command(name, request).dump(2));
  });
}

}  // namespace

extern "C" {

const char* pg_version(void) { return PROPGRAPH_VERSION; }

const char* pg_last_error(void) { return g_last_error.c_str(); }

void pg_string_free(char* s) { std::free(s); }

pg_status pg_graph_parse(const char* edgelist_text, pg_graph** out) {
  if (edgelist_text == nullptr || out == nullptr)
    return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] {
    *out = new pg_graph{Graph::from_edgelist(edgelist_text)};
  });
}

pg_status pg_graph_parse_json(const char* json_text, pg_graph** out) {
  if (json_text == nullptr || out == nullptr)
    return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] {
    *out = new pg_graph{Graph::from_json_string(json_text)};
  });
}

pg_status pg_graph_generate(const char* family, const char* params_json,
                            pg_graph** out) {
  if (family == nullptr || out == nullptr)
    return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] {
    json request = params_json != nullptr && params_json[0] != '\0'
                       ? json::parse(params_json)
                       : json::object();
    request["family"] = family;
    json bundle = propgraph::run_gen(request);
    std::string text = bundle["outputs"]["graph"]["edgelist"].get<std::string>();
    *out = new pg_graph{Graph::from_edgelist(text)};
  });
}

pg_status pg_graph_format(const pg_graph* g, char** out_edgelist) {
  if (g == nullptr || out_edgelist == nullptr)
    return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] { emit(out_edgelist, g->g.to_edgelist()); });
}

pg_status pg_graph_format_json(const pg_graph* g, char** out_json) {
  if (g == nullptr || out_json == nullptr)
    return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] { emit(out_json, g->g.to_json_string()); });
}

pg_status pg_graph_info(const pg_graph* g, char** out_json) {
  if (g == nullptr || out_json == nullptr)
    return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] {
    json info = {{"n", g->g.node_count()},
                 {"edges", g->g.edge_count()},
                 {"directed", g->g.directed()},
                 {"connected", g->g.connected()}};
    emit(out_json, info.dump());
  });
}

void pg_graph_free(pg_graph* g) { delete g; }

pg_status pg_gen(const char* request_json, char** out_bundle) {
  return run_bundle_command("gen", request_json, out_bundle);
}

pg_status pg_analyze(const char* request_json, char** out_bundle) {
  return run_bundle_command("analyze", request_json, out_bundle);
}

pg_status pg_bounds(const char* request_json, char** out_bundle) {
  return run_bundle_command("bounds", request_json, out_bundle);
}

pg_status pg_simulate(const char* request_json, char** out_bundle) {
  return run_bundle_command("simulate", request_json, out_bundle);
}

pg_status pg_rewire(const char* request_json, char** out_bundle) {
  return run_bundle_command("rewire", request_json, out_bundle);
}

pg_status pg_verify(uint64_t seed, char** out_bundle) {
  if (out_bundle == nullptr) return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] {
    json request = {{"seed", seed}};
    json bundle = propgraph::run_command("verify", request);
    emit(out_bundle, bundle.dump(2));
  });
}

pg_status pg_report_rerun(const char* manifest_json, char** out_bundle) {
  if (manifest_json == nullptr || out_bundle == nullptr)
    return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] {
    json manifest = json::parse(manifest_json);
    if (manifest.contains("manifest")) manifest = manifest["manifest"];
    std::string command = manifest.at("command").get<std::string>();
    json request = manifest.at("request");
    emit(out_bundle, propgraph::run_command(command, request).dump(2));
  });
}

pg_status pg_bundle_status(const char* bundle_json, char** out_status) {
  if (bundle_json == nullptr || out_status == nullptr)
    return set_error(PG_USAGE_ERROR, "null argument");
  return guarded([&] {
    json bundle = json::parse(bundle_json);
    emit(out_status, propgraph::bundle_status(bundle));
  });
}

}  // extern "C"
