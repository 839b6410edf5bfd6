#ifndef PROPGRAPH_REPORT_HPP
#define PROPGRAPH_REPORT_HPP

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "propgraph/models.hpp"

namespace propgraph {

using nlohmann::json;

ModelConfig model_config_from_json(const json& j);
json model_config_to_json(const ModelConfig& cfg);

// Request "graph" field: edge-list text (string) or the JSON graph schema.
Graph graph_from_request(const json& request);

// Report bundles: { "manifest": {...}, "outputs": {...}, "csv": {name: content} }.
// The manifest records the command and the full request so any bundle can be
// regenerated bit-identically (timestamps live only in the manifest).
json run_gen(const json& request);
json run_analyze(const json& request);
json run_bounds(const json& request);
json run_simulate(const json& request);
json run_rewire(const json& request);
json run_verify_bundle(const json& request);

// Dispatch on command name; used by the `report` subcommand to regenerate a
// bundle from its own manifest.
json run_command(const std::string& command, const json& request);

std::map<std::string, std::string> bundle_csvs(const json& bundle);

// "ok" or "refused"; refusals are embedded per-section so a bundle is still
// produced for partially refused analyses.
std::string bundle_status(const json& bundle);

}  // namespace propgraph

#endif
