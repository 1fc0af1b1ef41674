// Acceptance gate: runs the ten-criterion regression suite with its pinned
// defaults and prints one verdict line per criterion. Exit status is the
// number of failed criteria.

#include <cstdio>

#include "tfv/suite.hpp"

int main() {
  const auto checks = tfv::run_suite({});
  int failed = 0;
  for (const auto& c : checks) {
    std::printf("[%s] %-42s max_residual=%.6e tolerance=%.6e\n", c.pass ? "PASS" : "FAIL",
                c.id.c_str(), c.max_residual, c.tolerance);
    if (!c.pass) {
      ++failed;
      std::printf("        witnesses: %s\n", c.witnesses.dump().c_str());
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(checks.size()) - failed,
              checks.size());
  return failed;
}
