#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace andor {

// Default worker count: ANDOR_THREADS env var, else hardware concurrency.
inline int default_threads() {
  if (const char* env = std::getenv("ANDOR_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs `fn(begin, end, partial)` over fixed chunks of [0, n) and reduces the
// per-chunk partials in chunk order, so the result is identical for every
// thread count. Partial needs a default constructor; reduce(acc, partial) is
// applied sequentially.
template <typename Partial, typename Fn, typename Reduce>
Partial run_chunked(std::uint64_t n, std::uint64_t chunk_size, int threads,
                    Fn&& fn, Reduce&& reduce) {
  if (chunk_size == 0) chunk_size = 1;
  std::uint64_t chunks = n == 0 ? 0 : (n + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(chunks);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string error;

  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) break;
      std::uint64_t begin = c * chunk_size;
      std::uint64_t end = std::min(n, begin + chunk_size);
      try {
        fn(begin, end, partials[c]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed.store(true);
        error = e.what();
      }
    }
  };

  int nthreads = std::max(1, threads);
  if (nthreads == 1 || chunks <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("parallel task failed: " + error);

  Partial acc{};
  for (std::uint64_t c = 0; c < chunks; ++c) reduce(acc, partials[c]);
  return acc;
}

}  // namespace andor
