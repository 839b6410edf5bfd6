#ifndef PROPGRAPH_VERIFY_HPP
#define PROPGRAPH_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace propgraph {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  nlohmann::json detail;
};

// The ten acceptance criteria, seeded and deterministic.
std::vector<CriterionResult> run_criteria(std::uint64_t seed);

// Full verify bundle: criteria table plus the reproducibility re-run check.
nlohmann::json run_verify(std::uint64_t seed);

}  // namespace propgraph

#endif
