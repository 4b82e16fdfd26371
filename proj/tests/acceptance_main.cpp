// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. Seed and worker count can be overridden via arguments.

#include <cstdlib>
#include <iostream>

#include "andor/checks.hpp"
#include "andor/parallel.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  int threads = andor::default_threads();
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  if (argc > 2) threads = std::atoi(argv[2]);

  auto results = andor::run_acceptance(seed, threads, &std::cout);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  if (failed) {
    std::cout << failed << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all " << results.size() << " criteria passed" << std::endl;
  return 0;
}
