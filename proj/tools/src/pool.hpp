#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace chainglue::cli {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. fn must not throw;
/// callers record per-cell failures themselves. Results are written by index,
/// so completion order never shows in the output.
template <class Fn>
void run_cells(int count, int jobs, Fn&& fn) {
  const int workers = std::max(1, std::min(jobs, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace chainglue::cli
