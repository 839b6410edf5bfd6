/* C API for the propgraph analysis library.
 *
 * All functions returning pg_status set a thread-local error message
 * retrievable with pg_last_error(). Strings returned through out-parameters
 * are heap-allocated and must be released with pg_string_free(). Graph
 * handles are opaque and must be released with pg_graph_free().
 */
#ifndef PROPGRAPH_H
#define PROPGRAPH_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pg_status {
  PG_OK = 0,
  PG_USAGE_ERROR = 2,    /* malformed call: null pointers, bad enum values */
  PG_INPUT_ERROR = 3,    /* invalid graph/request content */
  PG_REFUSED = 4,        /* analysis refused (preconditions unmet) */
  PG_INTERNAL_ERROR = 5, /* bug or resource failure */
} pg_status;

typedef struct pg_graph pg_graph;

const char* pg_version(void);

/* Message from the most recent failing call on this thread; empty string if
 * none. The pointer stays valid until the next failing call. */
const char* pg_last_error(void);

void pg_string_free(char* s);

/* Graph construction and serialization. Formats match the CLI: edge-list
 * text ("n <count> <directed|undirected>" header) and the JSON schema
 * {"n":..,"directed":..,"edges":[[u,v],..]}. */
pg_status pg_graph_parse(const char* edgelist_text, pg_graph** out);
pg_status pg_graph_parse_json(const char* json_text, pg_graph** out);
/* family: path|cycle|complete|barbell|grid|causal|random_regular.
 * params_json carries the family parameters, e.g. {"n":8} or
 * {"rows":3,"cols":3} or {"n":8,"d":3,"seed":1}. */
pg_status pg_graph_generate(const char* family, const char* params_json,
                            pg_graph** out);
pg_status pg_graph_format(const pg_graph* g, char** out_edgelist);
pg_status pg_graph_format_json(const pg_graph* g, char** out_json);
/* {"n":..,"edges":..,"directed":..,"connected":..} */
pg_status pg_graph_info(const pg_graph* g, char** out_json);
void pg_graph_free(pg_graph* g);

/* Report-bundle commands. Each takes a JSON request (see the CLI docs for
 * the request schema) and produces a full report bundle:
 * {"manifest":{..},"outputs":{..},"csv":{name:content}}. */
pg_status pg_gen(const char* request_json, char** out_bundle);
pg_status pg_analyze(const char* request_json, char** out_bundle);
pg_status pg_bounds(const char* request_json, char** out_bundle);
pg_status pg_simulate(const char* request_json, char** out_bundle);
pg_status pg_rewire(const char* request_json, char** out_bundle);

/* Acceptance self-check; bundle outputs carry the criterion table. */
pg_status pg_verify(uint64_t seed, char** out_bundle);

/* Regenerate a bundle from its own manifest (reproducibility path). */
pg_status pg_report_rerun(const char* manifest_json, char** out_bundle);

/* "ok" or "refused" for a bundle produced by the functions above. */
pg_status pg_bundle_status(const char* bundle_json, char** out_status);

#ifdef __cplusplus
}
#endif

#endif
