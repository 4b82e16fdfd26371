#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace andor {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the full acceptance suite. All tolerances and sample sizes are pinned
// here; only the seed and worker count are configurable. When `out` is given,
// one "[PASS|FAIL] <id>. <name>: <detail>" line is printed per criterion as
// it finishes.
std::vector<CheckResult> run_acceptance(std::uint64_t seed, int threads,
                                        std::ostream* out = nullptr);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace andor
