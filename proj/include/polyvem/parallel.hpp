// Minimal deterministic cell-loop parallelism. Thread count is capped by the
// POLYVEM_THREADS environment variable; results are written to per-index slots
// so the outcome never depends on scheduling.

#ifndef POLYVEM_PARALLEL_HPP
#define POLYVEM_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace polyvem {

inline int maxThreads()
{
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("POLYVEM_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

/// Run fn(i) for i in [0, count) on up to maxThreads() threads, static chunks.
template <typename Fn>
void parallelFor(int count, Fn&& fn)
{
  int nThreads = std::min(maxThreads(), std::max(count, 1));
  if (nThreads <= 1 || count < 2) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nThreads);
  int chunk = (count + nThreads - 1) / nThreads;
  for (int t = 0; t < nThreads; ++t) {
    int lo = t * chunk;
    int hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn]() {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace polyvem

#endif
