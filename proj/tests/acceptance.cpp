// Acceptance harness: runs every criterion and prints one line per result.
#include <cstdio>

#include "propgraph/verify.hpp"

int main() {
  int failures = 0;
  for (const auto& c : propgraph::run_criteria(0)) {
    std::printf("%s criterion %2d %s (%.2fs)\n", c.pass ? "PASS" : "FAIL",
                c.id, c.name.c_str(), c.seconds);
    if (!c.pass) {
      ++failures;
      std::printf("       detail: %s\n", c.detail.dump().c_str());
    }
  }
  return failures == 0 ? 0 : 1;
}
